#ifndef CCB_MODEL_IO_HPP
#define CCB_MODEL_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccb/model.hpp"

namespace ccb {

// Text model format, one directive per line ('#' comments):
//   nodes <count>              total node count including X1 and Y
//   edge <from> <to> <weight>  nodes named X1..Xn and Y
//   link <node> identity|logistic
//   noise <node> <half-width>
//   continuous 0|1
//   kappa/zeta/l1_max/l2_max/c_lm <value>
namespace detail {

inline int parse_node(const std::string& tok, int node_count) {
    if (tok == "Y") return node_count - 1;
    if (tok.size() >= 2 && tok[0] == 'X') {
        int k = std::stoi(tok.substr(1));
        if (k >= 1 && k <= node_count - 1) return k - 1;
    }
    throw std::invalid_argument("bad node name: " + tok);
}

inline std::string node_name(int idx, int node_count) {
    if (idx == node_count - 1) return "Y";
    return "X" + std::to_string(idx + 1);
}

}  // namespace detail

inline CausalModel parse_model(std::istream& in) {
    CausalModel m;
    int node_count = 0;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<double>> weights;
    std::vector<LinkFunction> links;
    std::vector<double> noise;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("model line " + std::to_string(lineno) +
                                        ": " + why);
        };
        if (key == "nodes") {
            if (!(ls >> node_count) || node_count < 2) fail("bad node count");
            parents.assign(node_count, {});
            weights.assign(node_count, {});
            links.assign(node_count, LinkFunction::identity());
            noise.assign(node_count, 0.0);
        } else if (node_count == 0) {
            fail("'nodes' must come first");
        } else if (key == "edge") {
            std::string a, b;
            double w;
            if (!(ls >> a >> b >> w)) fail("edge needs: from to weight");
            int u = detail::parse_node(a, node_count);
            int v = detail::parse_node(b, node_count);
            parents[v].push_back(u);
            weights[v].push_back(w);
        } else if (key == "link") {
            std::string a, kind;
            if (!(ls >> a >> kind)) fail("link needs: node kind");
            int v = detail::parse_node(a, node_count);
            if (kind == "identity")
                links[v] = LinkFunction::identity();
            else if (kind == "logistic")
                links[v] = LinkFunction::logistic();
            else
                fail("unknown link kind " + kind);
        } else if (key == "noise") {
            std::string a;
            double w;
            if (!(ls >> a >> w)) fail("noise needs: node half-width");
            noise[detail::parse_node(a, node_count)] = w;
        } else if (key == "continuous") {
            int v;
            if (!(ls >> v)) fail("continuous needs 0/1");
            m.continuous = v != 0;
        } else if (key == "kappa") {
            ls >> m.constants.kappa;
        } else if (key == "zeta") {
            ls >> m.constants.zeta;
        } else if (key == "l1_max") {
            ls >> m.constants.L1_max;
        } else if (key == "l2_max") {
            ls >> m.constants.L2_max;
        } else if (key == "c_lm") {
            ls >> m.constants.c_lm;
        } else {
            fail("unknown directive " + key);
        }
    }
    if (node_count == 0)
        throw std::invalid_argument("model file missing 'nodes'");
    m.nx = node_count - 1;
    m.parents = parents;
    m.weights = weights;
    m.links = links;
    m.noise = noise;
    // canonical parent order, weights kept aligned
    for (int v = 0; v < node_count; ++v) {
        std::vector<std::pair<int, double>> pw;
        for (std::size_t k = 0; k < m.parents[v].size(); ++k)
            pw.emplace_back(m.parents[v][k], m.weights[v][k]);
        std::sort(pw.begin(), pw.end());
        for (std::size_t k = 0; k < pw.size(); ++k) {
            m.parents[v][k] = pw[k].first;
            m.weights[v][k] = pw[k].second;
        }
    }
    m.validate();
    return m;
}

inline CausalModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file " + path);
    return parse_model(in);
}

inline std::string serialize_model(const CausalModel& m) {
    const int N = m.node_count();
    std::ostringstream out;
    out << "nodes " << N << "\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out << "continuous " << (m.continuous ? 1 : 0) << "\n";
    out << "kappa " << num(m.constants.kappa) << "\n";
    out << "zeta " << num(m.constants.zeta) << "\n";
    out << "l1_max " << num(m.constants.L1_max) << "\n";
    out << "l2_max " << num(m.constants.L2_max) << "\n";
    out << "c_lm " << num(m.constants.c_lm) << "\n";
    for (int v = 0; v < N; ++v)
        for (std::size_t k = 0; k < m.parents[v].size(); ++k)
            out << "edge " << detail::node_name(m.parents[v][k], N) << " "
                << detail::node_name(v, N) << " " << num(m.weights[v][k])
                << "\n";
    for (int v = 0; v < N; ++v)
        if (m.links[v].kind == LinkKind::Logistic)
            out << "link " << detail::node_name(v, N) << " logistic\n";
    for (int v = 0; v < N && v < static_cast<int>(m.noise.size()); ++v)
        if (m.noise[v] != 0.0)
            out << "noise " << detail::node_name(v, N) << " "
                << num(m.noise[v]) << "\n";
    return out.str();
}

}  // namespace ccb

#endif  // CCB_MODEL_IO_HPP
