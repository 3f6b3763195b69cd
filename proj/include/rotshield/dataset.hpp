#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotshield/matrix.hpp"

namespace rotshield {

/// A d-attribute x N-record dataset. Record j is column j of `values`, so a
/// rotation applies as a plain matrix product from the left. The
/// unit_normalized flag records that every column has Euclidean norm 1.
struct Dataset {
    std::size_t d = 0;
    std::size_t N = 0;
    Matrix values; // d x N
    bool unit_normalized = false;
    std::vector<std::string> attribute_names; // optional; empty means attr1..attrd

    Dataset() = default;

    Dataset(std::size_t d_, std::size_t N_)
        : d(d_), N(N_), values(d_, N_, 0.0) {}

    double& at(std::size_t attr, std::size_t rec) { return values(attr, rec); }
    double at(std::size_t attr, std::size_t rec) const { return values(attr, rec); }

    std::vector<double> record(std::size_t j) const {
        std::vector<double> r(d);
        for (std::size_t i = 0; i < d; ++i) r[i] = values(i, j);
        return r;
    }

    std::vector<double> attribute(std::size_t k) const {
        std::vector<double> r(N);
        for (std::size_t j = 0; j < N; ++j) r[j] = values(k, j);
        return r;
    }

    std::string attribute_name(std::size_t k) const {
        if (k < attribute_names.size()) return attribute_names[k];
        return "attr" + std::to_string(k + 1);
    }
};

/// Euclidean norm of record j.
inline double record_norm(const Dataset& x, std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.d; ++i) s += x.values(i, j) * x.values(i, j);
    return std::sqrt(s);
}

/// Euclidean distance between records j and k of the same dataset.
inline double record_distance(const Dataset& x, std::size_t j, std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.d; ++i) {
        const double dlt = x.values(i, j) - x.values(i, k);
        s += dlt * dlt;
    }
    return std::sqrt(s);
}

/// Inner product of record j of a with record k of b.
inline double record_dot(const Dataset& a, std::size_t j, const Dataset& b,
                         std::size_t k) {
    if (a.d != b.d)
        throw std::invalid_argument("record_dot: attribute counts differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.d; ++i) s += a.values(i, j) * b.values(i, k);
    return s;
}

/// Checks finiteness and, when the flag is set, the unit-norm invariant.
inline void validate_dataset(const Dataset& x, const char* what) {
    ensure_finite(x.values, what);
    if (x.unit_normalized) {
        for (std::size_t j = 0; j < x.N; ++j)
            if (std::abs(record_norm(x, j) - 1.0) > 1e-9)
                throw std::runtime_error(
                    std::string(what) + ": record " + std::to_string(j) +
                    " marked unit-normalized but has norm != 1");
    }
}

struct NormalizeResult {
    Dataset data;               // unit_normalized = true
    std::vector<double> norms;  // original record norms; private to the owner
};

/// Divides every record by its Euclidean norm and returns the norms. The
/// norms never travel with released data; they stay with the data owner.
/// Throws when a record's norm falls below 1e-12, naming the record.
inline NormalizeResult normalize_to_unit(const Dataset& x) {
    NormalizeResult out;
    out.data = x;
    out.norms.resize(x.N);
    for (std::size_t j = 0; j < x.N; ++j) {
        const double nrm = record_norm(x, j);
        if (nrm < 1e-12)
            throw std::invalid_argument(
                "normalize_to_unit: record " + std::to_string(j) +
                " has (near-)zero norm");
        out.norms[j] = nrm;
        for (std::size_t i = 0; i < x.d; ++i) out.data.values(i, j) /= nrm;
    }
    out.data.unit_normalized = true;
    return out;
}

/// Columns of x selected by `indices`, in the given order.
inline Dataset subset_records(const Dataset& x,
                              const std::vector<std::size_t>& indices) {
    Dataset out(x.d, indices.size());
    out.unit_normalized = x.unit_normalized;
    out.attribute_names = x.attribute_names;
    for (std::size_t t = 0; t < indices.size(); ++t) {
        const std::size_t j = indices[t];
        if (j >= x.N)
            throw std::invalid_argument("subset_records: index " +
                                        std::to_string(j) + " out of range");
        for (std::size_t i = 0; i < x.d; ++i)
            out.values(i, t) = x.values(i, j);
    }
    return out;
}

/// Per-attribute (min, max) pairs.
inline std::vector<std::pair<double, double>> attribute_bounds(const Dataset& x) {
    if (x.N == 0)
        throw std::invalid_argument("attribute_bounds: empty dataset");
    std::vector<std::pair<double, double>> b(x.d);
    for (std::size_t i = 0; i < x.d; ++i) {
        double lo = x.values(i, 0), hi = x.values(i, 0);
        for (std::size_t j = 1; j < x.N; ++j) {
            lo = std::min(lo, x.values(i, j));
            hi = std::max(hi, x.values(i, j));
        }
        b[i] = {lo, hi};
    }
    return b;
}

} // namespace rotshield
