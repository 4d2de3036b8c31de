#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "gybe/tensor.hpp"

namespace gybe {

/// Partial bijection x_{a,b} on {1..n}: domain index a, range index b.
struct SisElement {
    int a;
    int b;
    int order;

    SisElement(int a_, int b_, int n) : a(a_), b(b_), order(n) {
        if (a < 1 || a > n || b < 1 || b > n)
            throw std::invalid_argument("SIS indices out of range");
    }

    friend bool operator==(const SisElement&, const SisElement&) = default;
    friend auto operator<=>(const SisElement&, const SisElement&) = default;
};

/// x_{a,b} * x_{c,d} = x_{a,d} if b == c, formal zero otherwise.
inline std::optional<SisElement> compose(const SisElement& x, const SisElement& y) {
    if (x.order != y.order)
        throw std::invalid_argument("compose: SIS order mismatch");
    if (x.b != y.a) return std::nullopt;
    return SisElement(x.a, y.b, x.order);
}

/// Matrix unit E_{a,b} = |a-1><b-1| on C^d. SIS index a labels ket |a-1>.
inline DenseOperator represent(const SisElement& x, int d) {
    if (x.order != d)
        throw std::invalid_argument("represent: SIS order must equal local dim");
    DenseOperator e(d, 1);
    e.at(static_cast<std::size_t>(x.a - 1), static_cast<std::size_t>(x.b - 1)) = 1.0;
    return e;
}

/// Finite complex combination of SIS elements; the formal zero is the empty
/// map, never a stored term.
class OperatorExpr {
public:
    explicit OperatorExpr(int order) : order_(order) {}

    static OperatorExpr term(const SisElement& x, cx coeff = 1.0) {
        OperatorExpr e(x.order);
        e.add(x, coeff);
        return e;
    }

    int order() const { return order_; }
    const std::map<std::pair<int, int>, cx>& terms() const { return terms_; }

    void add(const SisElement& x, cx coeff) {
        if (x.order != order_) throw std::invalid_argument("OperatorExpr order mismatch");
        auto key = std::make_pair(x.a, x.b);
        auto it = terms_.find(key);
        cx v = (it == terms_.end() ? cx{0.0, 0.0} : it->second) + coeff;
        if (v == cx{0.0, 0.0}) {
            if (it != terms_.end()) terms_.erase(it);
        } else {
            terms_[key] = v;
        }
    }

    OperatorExpr& operator+=(const OperatorExpr& o) {
        for (const auto& [k, v] : o.terms_) add(SisElement(k.first, k.second, order_), v);
        return *this;
    }
    OperatorExpr& operator*=(cx s) {
        if (s == cx{0.0, 0.0}) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, v] : terms_) v *= s;
        return *this;
    }
    friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) { return a += b; }
    friend OperatorExpr operator*(cx s, OperatorExpr a) { return a *= s; }

    /// Product through the semigroup composition rule.
    friend OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
        if (a.order_ != b.order_) throw std::invalid_argument("OperatorExpr order mismatch");
        OperatorExpr out(a.order_);
        for (const auto& [ka, va] : a.terms_)
            for (const auto& [kb, vb] : b.terms_) {
                auto prod = compose(SisElement(ka.first, ka.second, a.order_),
                                    SisElement(kb.first, kb.second, a.order_));
                if (prod) out.add(*prod, va * vb);
            }
        return out;
    }

    OperatorExpr adjoint() const {
        OperatorExpr out(order_);
        for (const auto& [k, v] : terms_)
            out.add(SisElement(k.second, k.first, order_), std::conj(v));
        return out;
    }

    DenseOperator represent() const {
        DenseOperator m(order_, 1);
        for (const auto& [k, v] : terms_)
            m.at(static_cast<std::size_t>(k.first - 1),
                 static_cast<std::size_t>(k.second - 1)) += v;
        return m;
    }

private:
    int order_;
    std::map<std::pair<int, int>, cx> terms_;
};

/// q = (1/sqrt(d-1)) sum_{j=2..d} x_{1,j}; reduces to x_{1,2} at d=2.
/// Uniform weights for d > 3 (reported as a convention by the CLI).
inline OperatorExpr supercharge(int d) {
    if (d < 2) throw std::invalid_argument("supercharge: d >= 2 required");
    OperatorExpr q(d);
    const double w = 1.0 / std::sqrt(static_cast<double>(d - 1));
    for (int j = 2; j <= d; ++j) q.add(SisElement(1, j, d), w);
    return q;
}

/// Single-site SUSY suite: q, q†, h = {q,q†}, b = qq†, f = q†q, w = 1 - 2b.
struct SusySuite {
    DenseOperator q, q_dag, h, b, f, w;
};

inline SusySuite susy_suite(int d) {
    const OperatorExpr qe = supercharge(d);
    const DenseOperator q = qe.represent();
    const DenseOperator qd = qe.adjoint().represent();
    const DenseOperator b = q * qd;
    const DenseOperator f = qd * q;
    const DenseOperator h = b + f;
    const DenseOperator w = DenseOperator::identity(d, 1) - cx{2.0, 0.0} * b;
    return SusySuite{q, qd, h, b, f, w};
}

// --- textual element syntax "x[a,b]@n" ---

inline std::string format_element(const SisElement& x) {
    return "x[" + std::to_string(x.a) + "," + std::to_string(x.b) + "]@" +
           std::to_string(x.order);
}

inline SisElement parse_element(const std::string& s) {
    int a = 0, b = 0, n = 0;
    char lead = 0, lb = 0, comma = 0, rb = 0, at = 0;
    std::size_t pos = 0;
    auto fail = [&]() -> SisElement {
        throw std::invalid_argument("bad SIS element syntax: " + s);
    };
    if (std::sscanf(s.c_str(), "%c%c%d%c%d%c%c%d%zn", &lead, &lb, &a, &comma, &b,
                    &rb, &at, &n, &pos) != 8)
        return fail();
    if (lead != 'x' || lb != '[' || comma != ',' || rb != ']' || at != '@' ||
        pos != s.size())
        return fail();
    return SisElement(a, b, n);
}

}  // namespace gybe
