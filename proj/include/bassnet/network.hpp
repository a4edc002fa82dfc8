#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bassnet/errors.hpp"

namespace bassnet {

// Directed edge k -> j carrying the internal influence rate q_{k,j} > 0.
// Node indices are 1-based everywhere in the public API.
struct Edge {
    int from = 0;
    int to = 0;
    double rate = 0.0;

    friend bool operator==(const Edge& a, const Edge& b) {
        return a.from == b.from && a.to == b.to && a.rate == b.rate;
    }
};

// Immutable weighted digraph with per-node external rates p_j >= 0 and
// per-edge internal rates q_{k,j} > 0.  Absence of an edge means rate 0;
// self-loops are rejected (a nonadopter does not influence itself).
// Construction validates every invariant, so an instance is always valid
// and safe to share across threads.
class Network {
  public:
    Network(int M, std::vector<double> p, std::vector<Edge> edges,
            std::string label = "")
        : M_(M), p_(std::move(p)), edges_(std::move(edges)),
          label_(std::move(label)) {
        require(M_ >= 1, Errc::invalid_size, "node count must be >= 1");
        require(static_cast<int>(p_.size()) == M_, Errc::invalid_size,
                "p vector length must equal the node count");
        for (int j = 0; j < M_; ++j) {
            require(std::isfinite(p_[j]), Errc::negative_rate,
                    "p[" + std::to_string(j + 1) + "] must be finite");
            require(p_[j] >= 0.0, Errc::negative_rate,
                    "p[" + std::to_string(j + 1) + "] must be >= 0");
        }
        for (const Edge& e : edges_) {
            require(e.from >= 1 && e.from <= M_ && e.to >= 1 && e.to <= M_,
                    Errc::index_out_of_range,
                    "edge (" + std::to_string(e.from) + "," +
                        std::to_string(e.to) + ") has a node index outside [1.." +
                        std::to_string(M_) + "]");
            require(e.from != e.to, Errc::self_loop,
                    "edge (" + std::to_string(e.from) + "," +
                        std::to_string(e.to) + ") is a self-loop");
            require(std::isfinite(e.rate) && e.rate > 0.0, Errc::negative_rate,
                    "edge (" + std::to_string(e.from) + "," +
                        std::to_string(e.to) + ") rate must be > 0");
        }
        std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
            return a.from != b.from ? a.from < b.from : a.to < b.to;
        });
        for (std::size_t i = 1; i < edges_.size(); ++i) {
            require(edges_[i - 1].from != edges_[i].from ||
                        edges_[i - 1].to != edges_[i].to,
                    Errc::duplicate_edge,
                    "duplicate edge (" + std::to_string(edges_[i].from) + "," +
                        std::to_string(edges_[i].to) + ")");
        }
        out_.assign(M_ + 1, {});
        in_.assign(M_ + 1, {});
        qin_.assign(M_ + 1, 0.0);
        for (const Edge& e : edges_) {
            out_[e.from].emplace_back(e.to, e.rate);
            in_[e.to].emplace_back(e.from, e.rate);
            qin_[e.to] += e.rate;
        }
    }

    int M() const { return M_; }

    double p(int j) const {
        check_index(j);
        return p_[j - 1];
    }

    const std::vector<double>& p_vector() const { return p_; }

    // Edges sorted by (from, to); deterministic for equal inputs.
    const std::vector<Edge>& edges() const { return edges_; }

    // q_{k,j}; 0 when the edge is absent.
    double q(int k, int j) const {
        check_index(k);
        check_index(j);
        for (const auto& [to, rate] : out_[k])
            if (to == j) return rate;
        return 0.0;
    }

    bool has_edge(int k, int j) const { return q(k, j) > 0.0; }

    // Maximal total internal rate on j: q_j = sum_k q_{k,j}.
    double q_in(int j) const {
        check_index(j);
        return qin_[j];
    }

    // (target, rate) pairs of edges leaving k.
    const std::vector<std::pair<int, double>>& out(int k) const {
        check_index(k);
        return out_[k];
    }

    // (source, rate) pairs of edges entering j.
    const std::vector<std::pair<int, double>>& in(int j) const {
        check_index(j);
        return in_[j];
    }

    const std::string& label() const { return label_; }

    // Largest possible adoption rate of any node: max_j (p_j + q_j).
    double max_total_rate() const {
        double m = 0.0;
        for (int j = 1; j <= M_; ++j) m = std::max(m, p_[j - 1] + qin_[j]);
        return m;
    }

    friend bool operator==(const Network& a, const Network& b) {
        return a.M_ == b.M_ && a.p_ == b.p_ && a.edges_ == b.edges_;
    }

  private:
    void check_index(int j) const {
        require(j >= 1 && j <= M_, Errc::index_out_of_range,
                "node index " + std::to_string(j) + " outside [1.." +
                    std::to_string(M_) + "]");
    }

    int M_;
    std::vector<double> p_;
    std::vector<Edge> edges_;
    std::string label_;
    std::vector<std::vector<std::pair<int, double>>> out_, in_;
    std::vector<double> qin_;
};

// Validating constructor in free-function form.
inline Network build_network(int M, std::vector<double> p,
                             std::vector<Edge> edges, std::string label = "") {
    return Network(M, std::move(p), std::move(edges), std::move(label));
}

inline double q_in(const Network& net, int j) { return net.q_in(j); }

} // namespace bassnet
