#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gybe/baxter.hpp"
#include "gybe/charges.hpp"
#include "gybe/tensor.hpp"

namespace gybe {

struct GybeShape {
    int d = 2;
    int m = 2;
    int l = 1;

    int total_sites() const { return m + l; }

    void validate() const {
        if (d < 2 || m < 2 || l < 1) throw std::invalid_argument("bad gYBE shape");
        pow_dim(d, m + l);  // throws past the dimension guard
    }
};

enum class Verdict { Pass, Fail, ExpectedFail };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::ExpectedFail: return "expected-fail";
    }
    return "?";
}

struct VerificationReport {
    std::string relation_id;
    GybeShape shape;
    int samples = 0;
    double max_residual = 0.0;
    double tolerance = 1e-10;
    Verdict verdict = Verdict::Pass;
    std::map<std::string, double> witness;  // worst-case parameters
    std::string ref;                        // catalog family / relation tag

    void finish(bool expect_failure = false) {
        const bool ok = max_residual <= tolerance;
        if (expect_failure)
            verdict = ok ? Verdict::Fail : Verdict::ExpectedFail;
        else
            verdict = ok ? Verdict::Pass : Verdict::Fail;
    }

    void record(double residual, const std::map<std::string, double>& params) {
        if (residual > max_residual || witness.empty()) {
            max_residual = residual;
            witness = params;
        }
    }
};

inline nlohmann::json to_json(const VerificationReport& r) {
    return {{"relation_id", r.relation_id},
            {"shape", {{"d", r.shape.d}, {"m", r.shape.m}, {"l", r.shape.l}}},
            {"samples", r.samples},
            {"max_residual", r.max_residual},
            {"tolerance", r.tolerance},
            {"verdict", verdict_name(r.verdict)},
            {"witness", r.witness},
            {"ref", r.ref}};
}

/// Order-independent merge: reports for the same relation combine by max
/// residual.
inline VerificationReport merge(VerificationReport a, const VerificationReport& b) {
    a.samples += b.samples;
    if (b.max_residual > a.max_residual) {
        a.max_residual = b.max_residual;
        a.witness = b.witness;
    }
    if (b.verdict == Verdict::Fail || a.verdict == Verdict::Fail)
        a.verdict = Verdict::Fail;
    return a;
}

namespace detail {

/// Spectral samples: real for linear profiles (u in [-2,2]), imaginary for
/// exponential ones (u = it, t in [0, 2pi]).
inline cx sample_u(const SpectralProfile& p, std::mt19937_64& rng) {
    if (p.kind == ProfileKind::ExpProjector) {
        std::uniform_real_distribution<double> dist(0.0, 2.0 * M_PI);
        return cx{0.0, dist(rng)};
    }
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    return cx{dist(rng), 0.0};
}

}  // namespace detail

/// Max residual of the spectral-parameter gYBE, both sides assembled
/// independently from embedded evaluations of R.
inline VerificationReport gybe_residual(const RMatrixFun& r, const GybeShape& shape,
                                        int samples = 16, std::uint64_t seed = 0,
                                        double tol = 1e-10) {
    shape.validate();
    if (r.sites() != shape.m || r.local_dim() != shape.d)
        throw std::invalid_argument("gybe_residual: operator does not fit shape");
    const int n = shape.total_sites();
    VerificationReport rep;
    rep.relation_id = "gybe";
    rep.shape = shape;
    rep.samples = samples;
    rep.tolerance = tol;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        const cx u = detail::sample_u(r.profile(), rng);
        const cx v = detail::sample_u(r.profile(), rng);
        const DenseOperator a = embed(r(u), 1, n);
        const DenseOperator b = embed(r(u + v), shape.l + 1, n);
        const DenseOperator c = embed(r(v), 1, n);
        const DenseOperator a2 = embed(r(v), shape.l + 1, n);
        const DenseOperator b2 = embed(r(u + v), 1, n);
        const DenseOperator c2 = embed(r(u), shape.l + 1, n);
        const double res = frobenius_distance(a * (b * c), a2 * (b2 * c2));
        rep.record(res, {{"u_re", u.real()},
                         {"u_im", u.imag()},
                         {"v_re", v.real()},
                         {"v_im", v.imag()}});
    }
    rep.finish();
    return rep;
}

enum class Relation {
    TripleZero,           // Q1 Q2 Q1 = Q2 Q1 Q2 (= 0 when both sides vanish)
    Braid,                // s1 s2 s1 = s2 s1 s2
    FarCommutativity,     // [s_i, s_j] = 0 for disjoint windows
    CommutingProjector,   // B1 B2 B1 = B2 B1 B2 = B1 B2
    Nbraid,               // [s2 s1, s1 + s2] = 0
    ExtraspecialSquare,   // x^2 = -1 (d = 2) or x^2 = -h ox ... ox h (d > 2)
    ExtraspecialAnticommute,  // x_i x_{i+l} = -x_{i+l} x_i
};

inline std::string relation_name(Relation r) {
    switch (r) {
        case Relation::TripleZero: return "triple_zero";
        case Relation::Braid: return "braid";
        case Relation::FarCommutativity: return "far_commutativity";
        case Relation::CommutingProjector: return "commuting_projector";
        case Relation::Nbraid: return "nbraid";
        case Relation::ExtraspecialSquare: return "extraspecial_square";
        case Relation::ExtraspecialAnticommute: return "extraspecial_anticommute";
    }
    return "?";
}

inline Relation relation_from_name(const std::string& s) {
    for (Relation r : {Relation::TripleZero, Relation::Braid,
                       Relation::FarCommutativity, Relation::CommutingProjector,
                       Relation::Nbraid, Relation::ExtraspecialSquare,
                       Relation::ExtraspecialAnticommute})
        if (relation_name(r) == s) return r;
    throw std::invalid_argument("unknown relation: " + s);
}

/// Residual of one algebraic relation template, operand embedded at offsets
/// 1 and 1+l of an (m+l)-site space.
inline VerificationReport relation_residual(Relation rel, const DenseOperator& op,
                                            int l = 1, double tol = 1e-10) {
    const int m = op.sites();
    const GybeShape shape{op.local_dim(), m, l};
    shape.validate();
    const int n = shape.total_sites();
    const DenseOperator s1 = embed(op, 1, n);
    const DenseOperator s2 = embed(op, 1 + l, n);
    VerificationReport rep;
    rep.relation_id = relation_name(rel);
    rep.shape = shape;
    rep.samples = 1;
    rep.tolerance = tol;
    double res = 0.0;
    switch (rel) {
        case Relation::TripleZero: {
            const double r1 = (s1 * s2 * s1).frobenius_norm();
            const double r2 = (s2 * s1 * s2).frobenius_norm();
            res = std::max(r1, r2);
            break;
        }
        case Relation::Braid:
            res = frobenius_distance(s1 * s2 * s1, s2 * s1 * s2);
            break;
        case Relation::FarCommutativity: {
            if (l < m)
                throw std::invalid_argument("far-commutativity needs disjoint windows");
            res = frobenius_distance(s1 * s2, s2 * s1);
            break;
        }
        case Relation::CommutingProjector: {
            const DenseOperator p12 = s1 * s2;
            res = std::max(frobenius_distance(s1 * p12, p12 * s2),
                           std::max(frobenius_distance(s1 * p12, p12),
                                    frobenius_distance(p12 * s2, p12)));
            break;
        }
        case Relation::Nbraid:
            res = frobenius_distance((s2 * s1) * (s1 + s2), (s1 + s2) * (s2 * s1));
            break;
        case Relation::ExtraspecialSquare: {
            DenseOperator expect = DenseOperator::identity(op.local_dim(), m);
            if (op.local_dim() > 2) {
                const SusySuite ss = susy_suite(op.local_dim());
                expect = ss.h;
                for (int j = 1; j < m; ++j) expect = kron(expect, ss.h);
            }
            expect *= cx{-1.0, 0.0};
            res = frobenius_distance(op * op, expect);
            rep.shape.l = 0;
            break;
        }
        case Relation::ExtraspecialAnticommute: {
            DenseOperator anti = s1 * s2 + s2 * s1;
            res = anti.frobenius_norm();
            break;
        }
    }
    rep.record(res, {{"l", static_cast<double>(l)}});
    rep.finish();
    return rep;
}

/// max_t | R(it)^dag R(it) - I | over sampled real t. Nilpotent-family
/// R-matrices are expected to fail; pass expect_failure for those.
inline VerificationReport unitarity_residual(const RMatrixFun& r, int t_samples = 8,
                                             std::uint64_t seed = 0, double tol = 1e-10,
                                             bool expect_failure = false) {
    VerificationReport rep;
    rep.relation_id = "unitarity";
    rep.shape = {r.local_dim(), r.sites(), 0};
    rep.samples = t_samples;
    rep.tolerance = tol;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 2.0 * M_PI);
    const DenseOperator id = DenseOperator::identity(r.local_dim(), r.sites());
    for (int s = 0; s < t_samples; ++s) {
        const double t = (s == 0) ? 1.0 : dist(rng);
        const DenseOperator ru = r(cx{0.0, t});
        rep.record(frobenius_distance(ru.adjoint() * ru, id), {{"t", t}});
    }
    rep.finish(expect_failure);
    return rep;
}

/// Imaginary-time periodicity R(i(t + 2pi/c)) = R(it), plus R(iT) = I.
inline VerificationReport periodicity_residual(const RMatrixFun& r,
                                               const std::vector<double>& ts = {0.1, 0.7,
                                                                                2.3},
                                               double tol = 1e-10) {
    if (r.profile().kind != ProfileKind::ExpProjector)
        throw std::invalid_argument("periodicity check needs an exp-projector profile");
    const double period = 2.0 * M_PI / r.profile().c;
    VerificationReport rep;
    rep.relation_id = "periodicity";
    rep.shape = {r.local_dim(), r.sites(), 0};
    rep.samples = static_cast<int>(ts.size()) + 1;
    rep.tolerance = tol;
    for (double t : ts)
        rep.record(frobenius_distance(r(cx{0.0, t + period}), r(cx{0.0, t})), {{"t", t}});
    rep.record(frobenius_distance(r(cx{0.0, period}),
                                  DenseOperator::identity(r.local_dim(), r.sites())),
               {{"t", period}});
    rep.finish();
    return rep;
}

/// Two-parameter YBE without the difference property, on m+1 sites.
inline VerificationReport nybe_residual(const RMatrixFun& r, int samples = 8,
                                        std::uint64_t seed = 0, double tol = 1e-10) {
    if (r.arity() != 2) throw std::invalid_argument("nybe_residual: arity-2 R required");
    const int n = r.sites() + 1;
    VerificationReport rep;
    rep.relation_id = "nybe";
    rep.shape = {r.local_dim(), r.sites(), 1};
    rep.samples = samples;
    rep.tolerance = tol;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);  // away from the poles
    for (int s = 0; s < samples; ++s) {
        const cx x{dist(rng), 0.0}, y{dist(rng), 0.0}, z{dist(rng), 0.0};
        const DenseOperator lhs =
            embed(r(x, y), 1, n) * embed(r(x, z), 2, n) * embed(r(y, z), 1, n);
        const DenseOperator rhs =
            embed(r(y, z), 2, n) * embed(r(x, z), 1, n) * embed(r(x, y), 2, n);
        rep.record(frobenius_distance(lhs, rhs),
                   {{"x", x.real()}, {"y", y.real()}, {"z", z.real()}});
    }
    rep.finish();
    return rep;
}

}  // namespace gybe
