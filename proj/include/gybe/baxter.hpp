#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "gybe/charges.hpp"
#include "gybe/tensor.hpp"

namespace gybe {

enum class ProfileKind {
    Linear,             // a(u) = c u
    ExpProjector,       // a(u) = (e^{cu} - 1)/k
    TwoParamNilpotent,  // a(x,y) = x - y
    TwoParamProjector,  // a(x,y) = (x - y)/(1 - x)
    TwoParamExtraspecial  // a(x,y) = (x - y)/(2 - x - y)
};

struct SpectralProfile {
    ProfileKind kind = ProfileKind::Linear;
    double c = 1.0;
    double k = 1.0;

    cx eval(cx u) const {
        switch (kind) {
            case ProfileKind::Linear: return cx{c, 0.0} * u;
            case ProfileKind::ExpProjector: return (std::exp(cx{c, 0.0} * u) - 1.0) / k;
            default:
                throw std::logic_error("one-parameter eval on a two-parameter profile");
        }
    }

    cx eval(cx x, cx y) const {
        switch (kind) {
            case ProfileKind::TwoParamNilpotent: return x - y;
            case ProfileKind::TwoParamProjector: {
                if (std::abs(cx{1.0, 0.0} - x) < 1e-14)
                    throw std::domain_error("two-parameter projector profile: pole at x = 1");
                return (x - y) / (cx{1.0, 0.0} - x);
            }
            case ProfileKind::TwoParamExtraspecial: {
                if (std::abs(cx{2.0, 0.0} - x - y) < 1e-14)
                    throw std::domain_error("extraspecial profile: pole at x + y = 2");
                return (x - y) / (cx{2.0, 0.0} - x - y);
            }
            default:
                throw std::logic_error("two-parameter eval on a one-parameter profile");
        }
    }

    bool two_param() const {
        return kind == ProfileKind::TwoParamNilpotent ||
               kind == ProfileKind::TwoParamProjector ||
               kind == ProfileKind::TwoParamExtraspecial;
    }
};

/// R(u) = I + a(u) G, or R(x,y) = I + a(x,y) G for the two-parameter kinds.
class RMatrixFun {
public:
    RMatrixFun(DenseOperator generator, SpectralProfile profile)
        : gen_(std::move(generator)), profile_(profile) {}

    const DenseOperator& generator() const { return gen_; }
    const SpectralProfile& profile() const { return profile_; }
    int arity() const { return profile_.two_param() ? 2 : 1; }
    int sites() const { return gen_.sites(); }
    int local_dim() const { return gen_.local_dim(); }

    DenseOperator operator()(cx u) const {
        DenseOperator r = DenseOperator::identity(gen_.local_dim(), gen_.sites());
        r += profile_.eval(u) * gen_;
        return r;
    }

    DenseOperator operator()(cx x, cx y) const {
        DenseOperator r = DenseOperator::identity(gen_.local_dim(), gen_.sites());
        r += profile_.eval(x, y) * gen_;
        return r;
    }

private:
    DenseOperator gen_;
    SpectralProfile profile_;
};

namespace detail {

inline void check_residual(double res, double tol, const std::string& what) {
    if (res > tol)
        throw std::invalid_argument(what + " (residual " + std::to_string(res) + ")");
}

}  // namespace detail

/// R(u) = I + c u Q with Q^2 = 0 (checked); inverse is R(-u).
inline RMatrixFun baxterize_nilpotent(const DenseOperator& q, double c = 1.0) {
    detail::check_residual((q * q).frobenius_norm(), 1e-10,
                           "baxterize_nilpotent: generator is not nilpotent");
    return RMatrixFun(q, SpectralProfile{ProfileKind::Linear, c, 1.0});
}

/// R(u) = I + ((e^{cu}-1)/k) E with E^2 = k E (checked); R(u)R(v) = R(u+v).
inline RMatrixFun baxterize_projector(const DenseOperator& e, double k = 1.0,
                                      double c = 1.0) {
    DenseOperator scaled = e;
    scaled *= cx{k, 0.0};
    detail::check_residual(frobenius_distance(e * e, scaled), 1e-8 * std::max(1.0, k),
                           "baxterize_projector: E^2 != kE");
    return RMatrixFun(e, SpectralProfile{ProfileKind::ExpProjector, c, k});
}

/// R(u) = I + c u P.
inline RMatrixFun baxterize_permutation(int d, double c = 1.0) {
    return RMatrixFun(permutation_op(d), SpectralProfile{ProfileKind::Linear, c, 1.0});
}

/// Constant entangler (1/sqrt2)(I + x), x = i sigma_y ox sigma_x.
inline DenseOperator bell_matrix() {
    const DenseOperator x = extraspecial_generator(2, 2);
    DenseOperator r = DenseOperator::identity(2, 2) + x;
    r *= cx{1.0 / std::sqrt(2.0), 0.0};
    return r;
}

enum class TwoParamKind { Nilpotent, Projector, Extraspecial };

/// Two-parameter Baxterized form for generators obeying
/// [s2 s1, s1 + s2] = 0; the structural condition per kind is checked.
inline RMatrixFun baxterize_two_param(const DenseOperator& gen, TwoParamKind kind) {
    const int m = gen.sites();
    const int n = m + 1;  // l = 1 overlap check
    // the extraspecial form descends from the Hecke-algebra relations instead
    // of the braid-like condition, which its generators do not satisfy
    if (kind != TwoParamKind::Extraspecial && pow_dim(gen.local_dim(), n) <= kMaxDim) {
        const DenseOperator s1 = embed(gen, 1, n);
        const DenseOperator s2 = embed(gen, 2, n);
        const DenseOperator lhs = (s2 * s1) * (s1 + s2);
        const DenseOperator rhs = (s1 + s2) * (s2 * s1);
        detail::check_residual(frobenius_distance(lhs, rhs), 1e-10,
                               "baxterize_two_param: braid-like relation fails");
    }
    ProfileKind pk;
    switch (kind) {
        case TwoParamKind::Nilpotent:
            detail::check_residual((gen * gen).frobenius_norm(), 1e-10,
                                   "baxterize_two_param: generator not nilpotent");
            pk = ProfileKind::TwoParamNilpotent;
            break;
        case TwoParamKind::Projector:
            detail::check_residual(frobenius_distance(gen * gen, gen), 1e-10,
                                   "baxterize_two_param: generator not idempotent");
            pk = ProfileKind::TwoParamProjector;
            break;
        case TwoParamKind::Extraspecial: {
            DenseOperator sq = gen * gen;
            sq += DenseOperator::identity(gen.local_dim(), gen.sites());
            detail::check_residual(sq.frobenius_norm(), 1e-10,
                                   "baxterize_two_param: generator^2 != -1");
            pk = ProfileKind::TwoParamExtraspecial;
            break;
        }
    }
    return RMatrixFun(gen, SpectralProfile{pk, 1.0, 1.0});
}

// --- profile textual form: "linear{c=1}", "exp{c=1,k=1}", "2p-nilp",
//     "2p-proj", "2p-exs" ---

inline std::string format_profile(const SpectralProfile& p) {
    char buf[64];
    switch (p.kind) {
        case ProfileKind::Linear:
            std::snprintf(buf, sizeof buf, "linear{c=%g}", p.c);
            return buf;
        case ProfileKind::ExpProjector:
            std::snprintf(buf, sizeof buf, "exp{c=%g,k=%g}", p.c, p.k);
            return buf;
        case ProfileKind::TwoParamNilpotent: return "2p-nilp";
        case ProfileKind::TwoParamProjector: return "2p-proj";
        case ProfileKind::TwoParamExtraspecial: return "2p-exs";
    }
    return "?";
}

inline SpectralProfile parse_profile(const std::string& s) {
    SpectralProfile p;
    if (s.rfind("linear", 0) == 0) {
        p.kind = ProfileKind::Linear;
        std::sscanf(s.c_str(), "linear{c=%lf}", &p.c);
        return p;
    }
    if (s.rfind("exp", 0) == 0) {
        p.kind = ProfileKind::ExpProjector;
        std::sscanf(s.c_str(), "exp{c=%lf,k=%lf}", &p.c, &p.k);
        return p;
    }
    if (s == "2p-nilp") return {ProfileKind::TwoParamNilpotent, 1.0, 1.0};
    if (s == "2p-proj") return {ProfileKind::TwoParamProjector, 1.0, 1.0};
    if (s == "2p-exs") return {ProfileKind::TwoParamExtraspecial, 1.0, 1.0};
    throw std::invalid_argument("bad profile: " + s);
}

/// R-matrix for a catalog charge: linear profile for nilpotent charges,
/// exponential-projector profile for the rest.
inline RMatrixFun rmatrix_for(const ChargeOperator& c, double cc = 1.0) {
    const DenseOperator gen = rmatrix_generator(c);
    if (c.kind == ChargeKind::Nilpotent) return baxterize_nilpotent(gen, cc);
    return baxterize_projector(gen, c.k, cc);
}

}  // namespace gybe
