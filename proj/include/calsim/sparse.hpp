#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace calsim {

// Sparse feature vector: (term_id, weight) pairs with strictly ascending ids.
struct SparseVector {
    std::vector<std::pair<std::uint32_t, double>> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }

    double l2_norm() const {
        double s = 0.0;
        for (const auto& [id, w] : entries) s += w * w;
        return std::sqrt(s);
    }

    // Scales to unit L2 norm; the zero vector is left unchanged.
    void l2_normalize() {
        double n = l2_norm();
        if (n == 0.0) return;
        for (auto& [id, w] : entries) w /= n;
    }

    bool operator==(const SparseVector&) const = default;
};

inline double dot(const std::vector<double>& dense, const SparseVector& sv) {
    double s = 0.0;
    for (const auto& [id, w] : sv.entries)
        if (id < dense.size()) s += dense[id] * w;
    return s;
}

inline double dot(const SparseVector& a, const SparseVector& b) {
    double s = 0.0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() && ib != b.entries.end()) {
        if (ia->first < ib->first) ++ia;
        else if (ib->first < ia->first) ++ib;
        else { s += ia->second * ib->second; ++ia; ++ib; }
    }
    return s;
}

// a - b, merged over the union of ids.
inline SparseVector diff(const SparseVector& a, const SparseVector& b) {
    SparseVector out;
    out.entries.reserve(a.size() + b.size());
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() || ib != b.entries.end()) {
        if (ib == b.entries.end() || (ia != a.entries.end() && ia->first < ib->first)) {
            out.entries.push_back(*ia++);
        } else if (ia == a.entries.end() || ib->first < ia->first) {
            out.entries.emplace_back(ib->first, -ib->second);
            ++ib;
        } else {
            double w = ia->second - ib->second;
            if (w != 0.0) out.entries.emplace_back(ia->first, w);
            ++ia; ++ib;
        }
    }
    return out;
}

}  // namespace calsim
