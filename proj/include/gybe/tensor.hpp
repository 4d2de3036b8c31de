#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gybe {

using cx = std::complex<double>;

inline constexpr std::size_t kMaxDim = 4096;  // d^N guard, desk scale only

inline std::size_t pow_dim(int d, int sites) {
    std::size_t dim = 1;
    for (int i = 0; i < sites; ++i) {
        dim *= static_cast<std::size_t>(d);
        if (dim > kMaxDim)
            throw std::domain_error("dimension d^N exceeds guard of " +
                                    std::to_string(kMaxDim));
    }
    return dim;
}

/// Dense complex operator on (C^d)^{tensor N}, row-major, big-endian basis
/// order (leftmost site is the most significant digit).
class DenseOperator {
public:
    DenseOperator(int local_dim, int sites)
        : d_(local_dim), sites_(sites), dim_(pow_dim(local_dim, sites)),
          a_(dim_ * dim_, cx{0.0, 0.0}) {
        if (local_dim < 1 || sites < 0)
            throw std::invalid_argument("bad operator shape");
    }

    static DenseOperator identity(int d, int sites) {
        DenseOperator op(d, sites);
        for (std::size_t i = 0; i < op.dim_; ++i) op.a_[i * op.dim_ + i] = 1.0;
        return op;
    }

    static DenseOperator zero(int d, int sites) { return DenseOperator(d, sites); }

    int local_dim() const { return d_; }
    int sites() const { return sites_; }
    std::size_t dim() const { return dim_; }

    cx operator()(std::size_t r, std::size_t c) const { return a_[r * dim_ + c]; }
    cx& at(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }

    DenseOperator adjoint() const {
        DenseOperator out(d_, sites_);
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c)
                out.a_[c * dim_ + r] = std::conj(a_[r * dim_ + c]);
        return out;
    }

    DenseOperator transpose() const {
        DenseOperator out(d_, sites_);
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c)
                out.a_[c * dim_ + r] = a_[r * dim_ + c];
        return out;
    }

    DenseOperator& operator+=(const DenseOperator& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    DenseOperator& operator-=(const DenseOperator& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    DenseOperator& operator*=(cx s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend DenseOperator operator+(DenseOperator a, const DenseOperator& b) { return a += b; }
    friend DenseOperator operator-(DenseOperator a, const DenseOperator& b) { return a -= b; }
    friend DenseOperator operator*(cx s, DenseOperator a) { return a *= s; }
    friend DenseOperator operator*(DenseOperator a, cx s) { return a *= s; }

    /// Matrix product. Skips zero entries of the left factor; the operators
    /// in this artifact are identity-plus-sparse, so this is the fast path.
    friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
        a.check_same_shape(b);
        const std::size_t n = a.dim_;
        DenseOperator out(a.d_, a.sites_);
        for (std::size_t r = 0; r < n; ++r) {
            const cx* arow = a.a_.data() + r * n;
            cx* orow = out.a_.data() + r * n;
            for (std::size_t k = 0; k < n; ++k) {
                const cx v = arow[k];
                if (v == cx{0.0, 0.0}) continue;
                const cx* brow = b.a_.data() + k * n;
                for (std::size_t c = 0; c < n; ++c) orow[c] += v * brow[c];
            }
        }
        return out;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    double trace_real() const {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) s += a_[i * dim_ + i].real();
        return s;
    }

    bool is_hermitian(double tol = 1e-12) const {
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = r; c < dim_; ++c)
                if (std::abs(a_[r * dim_ + c] - std::conj(a_[c * dim_ + r])) > tol)
                    return false;
        return true;
    }

    void check_same_shape(const DenseOperator& o) const {
        if (d_ != o.d_ || sites_ != o.sites_)
            throw std::invalid_argument("operator shape mismatch");
    }

private:
    int d_;
    int sites_;
    std::size_t dim_;
    std::vector<cx> a_;
};

/// (A tensor B): A occupies the leftmost sites.
inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
    if (a.local_dim() != b.local_dim())
        throw std::invalid_argument("kron: mismatched local dimension");
    DenseOperator out(a.local_dim(), a.sites() + b.sites());
    const std::size_t da = a.dim(), db = b.dim();
    for (std::size_t ra = 0; ra < da; ++ra)
        for (std::size_t ca = 0; ca < da; ++ca) {
            const cx va = a(ra, ca);
            if (va == cx{0.0, 0.0}) continue;
            for (std::size_t rb = 0; rb < db; ++rb)
                for (std::size_t cb = 0; cb < db; ++cb) {
                    const cx vb = b(rb, cb);
                    if (vb == cx{0.0, 0.0}) continue;
                    out.at(ra * db + rb, ca * db + cb) = va * vb;
                }
        }
    return out;
}

/// Places op (on m sites) at window [start, start+m-1] of an N-site space,
/// identity elsewhere. start is 1-based.
inline DenseOperator embed(const DenseOperator& op, int start, int total) {
    const int m = op.sites();
    if (start < 1 || start + m - 1 > total)
        throw std::out_of_range("embed: window exceeds total sites");
    DenseOperator out = op;
    if (start > 1)
        out = kron(DenseOperator::identity(op.local_dim(), start - 1), out);
    const int right = total - (start - 1) - m;
    if (right > 0) out = kron(out, DenseOperator::identity(op.local_dim(), right));
    return out;
}

/// Two-site swap P(x ox y) = y ox x, P^2 = I.
inline DenseOperator permutation_op(int d) {
    if (d < 2) throw std::invalid_argument("permutation_op: d >= 2 required");
    DenseOperator p(d, 2);
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            p.at(static_cast<std::size_t>(y) * d + x,
                 static_cast<std::size_t>(x) * d + y) = 1.0;
    return p;
}

inline double frobenius_distance(const DenseOperator& a, const DenseOperator& b) {
    a.check_same_shape(b);
    return (a - b).frobenius_norm();
}

/// Normalized or raw state on N sites of local dimension d, big-endian.
class StateVector {
public:
    StateVector(int local_dim, int sites)
        : d_(local_dim), sites_(sites), amps_(pow_dim(local_dim, sites), cx{0.0, 0.0}) {}

    static StateVector basis_ket(int d, int sites, std::size_t index) {
        StateVector s(d, sites);
        if (index >= s.amps_.size()) throw std::out_of_range("basis index");
        s.amps_[index] = 1.0;
        return s;
    }

    /// Parses a base-d digit string, leftmost site most significant.
    static StateVector basis_ket(int d, const std::string& label) {
        StateVector s(d, static_cast<int>(label.size()));
        std::size_t idx = 0;
        for (char ch : label) {
            int digit = ch - '0';
            if (digit < 0 || digit >= d)
                throw std::invalid_argument("ket label digit out of range: " + label);
            idx = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(digit);
        }
        s.amps_[idx] = 1.0;
        return s;
    }

    int local_dim() const { return d_; }
    int sites() const { return sites_; }
    std::size_t dim() const { return amps_.size(); }

    cx operator[](std::size_t i) const { return amps_[i]; }
    cx& at(std::size_t i) { return amps_[i]; }

    double norm() const {
        double s = 0.0;
        for (const auto& v : amps_) s += std::norm(v);
        return std::sqrt(s);
    }

    StateVector normalized() const {
        const double n = norm();
        if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
        StateVector out = *this;
        for (auto& v : out.amps_) v /= n;
        return out;
    }

    std::string label_of(std::size_t index) const {
        std::string s(static_cast<std::size_t>(sites_), '0');
        for (int i = sites_ - 1; i >= 0; --i) {
            s[static_cast<std::size_t>(i)] =
                static_cast<char>('0' + static_cast<int>(index % d_));
            index /= static_cast<std::size_t>(d_);
        }
        return s;
    }

private:
    int d_;
    int sites_;
    std::vector<cx> amps_;
};

inline StateVector apply(const DenseOperator& op, const StateVector& s) {
    if (op.local_dim() != s.local_dim() || op.sites() != s.sites())
        throw std::invalid_argument("operator/state shape mismatch");
    StateVector out(s.local_dim(), s.sites());
    const std::size_t n = s.dim();
    for (std::size_t r = 0; r < n; ++r) {
        cx acc{0.0, 0.0};
        for (std::size_t c = 0; c < n; ++c) {
            const cx v = op(r, c);
            if (v != cx{0.0, 0.0}) acc += v * s[c];
        }
        out.at(r) = acc;
    }
    return out;
}

inline double state_distance(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("state shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

// --- JSON serialization: entries as [re, im] pairs, row-major, plus {d, N} ---

inline nlohmann::json to_json(const DenseOperator& op) {
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t r = 0; r < op.dim(); ++r)
        for (std::size_t c = 0; c < op.dim(); ++c) {
            const cx v = op(r, c);
            entries.push_back({v.real(), v.imag()});
        }
    return {{"d", op.local_dim()}, {"N", op.sites()}, {"entries", entries}};
}

inline DenseOperator operator_from_json(const nlohmann::json& j) {
    DenseOperator op(j.at("d").get<int>(), j.at("N").get<int>());
    const auto& entries = j.at("entries");
    if (entries.size() != op.dim() * op.dim())
        throw std::invalid_argument("operator json: wrong entry count");
    std::size_t i = 0;
    for (std::size_t r = 0; r < op.dim(); ++r)
        for (std::size_t c = 0; c < op.dim(); ++c, ++i)
            op.at(r, c) = cx{entries[i][0].get<double>(), entries[i][1].get<double>()};
    return op;
}

}  // namespace gybe
