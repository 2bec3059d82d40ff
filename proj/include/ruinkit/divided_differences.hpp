#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ruinkit/errors.hpp"
#include "ruinkit/poly.hpp"

namespace ruinkit {

/// Relative node-separation tolerance below which divided differences are
/// refused (the theory assumes distinct nodes).
inline constexpr double kNodeSeparationTol = 1e-6;

inline void check_nodes_distinct(const std::vector<Cx>& nodes, double tol = kNodeSeparationTol) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            const double sep = std::abs(nodes[i] - nodes[j]);
            const double scale = std::max({1.0, std::abs(nodes[i]), std::abs(nodes[j])});
            if (sep <= tol * scale)
                throw DegenerateRoots("divided differences: nodes " + std::to_string(i) + " and " +
                                      std::to_string(j) + " coincide within tolerance");
        }
}

/// Full triangular table of divided differences f[x_i, ..., x_j] built from
/// values f(x_i). Works for scalar (Cx) and matrix (CMatrix) values alike;
/// T needs subtraction and division by a complex scalar.
template <class T>
class DividedDifferenceTable {
public:
    DividedDifferenceTable(std::vector<Cx> nodes, std::vector<T> values)
        : nodes_(std::move(nodes)), k_(nodes_.size()) {
        if (values.size() != k_ || k_ == 0)
            throw Error("divided differences: need one value per node, at least one node");
        check_nodes_distinct(nodes_);
        table_.resize(k_ * k_);
        for (std::size_t i = 0; i < k_; ++i) at(i, i) = values[i];
        for (std::size_t w = 1; w < k_; ++w)
            for (std::size_t i = 0; i + w < k_; ++i) {
                const std::size_t j = i + w;
                at(i, j) = (at(i + 1, j) - at(i, j - 1)) / (nodes_[j] - nodes_[i]);
            }
    }

    std::size_t size() const { return k_; }
    const std::vector<Cx>& nodes() const { return nodes_; }

    /// f[x_i, ..., x_j], 0-based, i <= j.
    const T& value(std::size_t i, std::size_t j) const { return table_[i * k_ + j]; }

    /// f[x_0, ..., x_k], 0-based.
    const T& prefix(std::size_t k) const { return value(0, k); }

private:
    T& at(std::size_t i, std::size_t j) { return table_[i * k_ + j]; }

    std::vector<Cx> nodes_;
    std::size_t k_;
    std::vector<T> table_;
};

} // namespace ruinkit
