#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gybe/sis.hpp"
#include "gybe/tensor.hpp"

namespace gybe {

enum class Family {
    Schoices,
    Qpe,
    Qghz,
    Qw,
    MProduct,
    Qir,
    MGhz,
    MWState,
    Uq1,
    Uq2,
    Uq3,
    Uq4,
    Uq5,
    Uq6,
    Uq7,
    Uq8,
    Uq9,
    Lowl,
    AppendixA,
    Synth,
};

enum class ChargeKind { Nilpotent, UnitaryProjector, Hamiltonian };

inline std::string family_name(Family f) {
    switch (f) {
        case Family::Schoices: return "schoices";
        case Family::Qpe: return "qpe";
        case Family::Qghz: return "qghz";
        case Family::Qw: return "qw";
        case Family::MProduct: return "mproduct";
        case Family::Qir: return "qir";
        case Family::MGhz: return "mghz";
        case Family::MWState: return "mwstate";
        case Family::Uq1: return "uq1";
        case Family::Uq2: return "uq2";
        case Family::Uq3: return "uq3";
        case Family::Uq4: return "uq4";
        case Family::Uq5: return "uq5";
        case Family::Uq6: return "uq6";
        case Family::Uq7: return "uq7";
        case Family::Uq8: return "uq8";
        case Family::Uq9: return "uq9";
        case Family::Lowl: return "lowl";
        case Family::AppendixA: return "appendixA";
        case Family::Synth: return "synth";
    }
    return "?";
}

struct ChargeSpec {
    Family family;
    int index = 0;                // k for indexed families
    std::vector<double> weights;  // alpha, beta, gamma, alpha_p ...
    int m = 2;
    int d = 2;
    int r = 0;                 // mproduct / qir
    bool dag = false;          // mproduct
    std::string sig;           // dagger signature: '0' plain, '1' dagger
    std::vector<int> sites;    // qir: 0-based sites carrying the supercharges
};

struct ChargeOperator {
    DenseOperator op;  // Q for nilpotent/projector kinds, H for hamiltonian kind
    ChargeSpec spec;
    ChargeKind kind;
    double k = 1.0;  // declared projector normalization: E^2 = k E
};

// Single-site alphabet for tensor words.
enum class SiteOp { I, Q, Qd, B, F, W, H };

inline DenseOperator site_matrix(SiteOp s, const SusySuite& ss, int d) {
    switch (s) {
        case SiteOp::I: return DenseOperator::identity(d, 1);
        case SiteOp::Q: return ss.q;
        case SiteOp::Qd: return ss.q_dag;
        case SiteOp::B: return ss.b;
        case SiteOp::F: return ss.f;
        case SiteOp::W: return ss.w;
        case SiteOp::H: return ss.h;
    }
    throw std::logic_error("unreachable");
}

inline DenseOperator tensor_word(const std::vector<SiteOp>& word, const SusySuite& ss,
                                 int d) {
    DenseOperator out = site_matrix(word.at(0), ss, d);
    for (std::size_t j = 1; j < word.size(); ++j)
        out = kron(out, site_matrix(word[j], ss, d));
    return out;
}

namespace detail {

inline std::vector<std::vector<SiteOp>> schoices_words() {
    using S = SiteOp;
    return {{S::W, S::Q},  {S::Q, S::W},  {S::Q, S::Q},
            {S::Qd, S::Qd}, {S::Q, S::Qd}, {S::Qd, S::Q}};
}

inline std::vector<std::vector<SiteOp>> qpe_words() {
    using S = SiteOp;
    return {
        {S::Q, S::Q, S::W},  {S::Qd, S::Qd, S::W}, {S::Qd, S::Q, S::W}, {S::Q, S::Qd, S::W},
        {S::W, S::Q, S::Q},  {S::W, S::Qd, S::Qd}, {S::W, S::Q, S::Qd}, {S::W, S::Qd, S::Q},
        {S::Q, S::W, S::Q},  {S::Qd, S::W, S::Qd}, {S::Q, S::W, S::Qd}, {S::Qd, S::W, S::Q},
    };
}

inline std::vector<std::vector<SiteOp>> qghz_words() {
    using S = SiteOp;
    return {
        {S::Q, S::Q, S::Q},   {S::Q, S::Q, S::Qd},  {S::Q, S::Qd, S::Q},
        {S::Qd, S::Q, S::Q},  {S::Qd, S::Qd, S::Q}, {S::Q, S::Qd, S::Qd},
        {S::Qd, S::Q, S::Qd}, {S::Qd, S::Qd, S::Qd},
    };
}

// Each W-family charge is a sum of two tensor words.
inline std::vector<std::pair<std::vector<SiteOp>, std::vector<SiteOp>>> qw_words() {
    using S = SiteOp;
    return {
        {{S::B, S::Qd, S::Q}, {S::Qd, S::B, S::Q}},
        {{S::Qd, S::B, S::Qd}, {S::B, S::Qd, S::Qd}},
        {{S::Qd, S::Qd, S::B}, {S::B, S::Qd, S::Qd}},
        {{S::Qd, S::Qd, S::B}, {S::Qd, S::B, S::Qd}},
        {{S::Q, S::Q, S::F}, {S::Q, S::F, S::Q}},
        {{S::Q, S::Q, S::F}, {S::F, S::Q, S::Q}},
        {{S::Q, S::F, S::Q}, {S::F, S::Q, S::Q}},
        {{S::Qd, S::Q, S::F}, {S::Qd, S::F, S::Q}},
    };
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline double weight_norm(const std::vector<double>& w) {
    double s = 0.0;
    for (double v : w) s += v * v;
    require(s > 0.0, "weights must not all vanish");
    return std::sqrt(s);
}

}  // namespace detail

/// Builds the charge operator for a catalog spec. Nilpotent builds verify
/// Q^2 = 0 before returning.
inline ChargeOperator build(const ChargeSpec& spec) {
    using detail::require;
    const int d = spec.d, m = spec.m;
    require(d >= 2, "local dimension must be >= 2");
    require(m >= 2, "window size must be >= 2");
    const SusySuite ss = susy_suite(d);

    auto sum_words =
        [&](const std::vector<std::pair<double, std::vector<SiteOp>>>& terms,
            double norm) {
            DenseOperator acc = DenseOperator::zero(d, m);
            for (const auto& [coeff, word] : terms) {
                require(static_cast<int>(word.size()) == m, "word length != m");
                acc += cx{coeff / norm, 0.0} * tensor_word(word, ss, d);
            }
            return acc;
        };

    auto weights_or_ones = [&](std::size_t n) {
        std::vector<double> w = spec.weights;
        if (w.empty()) w.assign(n, 1.0);
        require(w.size() == n, family_name(spec.family) + ": expected " +
                                   std::to_string(n) + " weights");
        return w;
    };

    ChargeOperator out{DenseOperator::zero(d, m), spec, ChargeKind::Nilpotent, 1.0};

    switch (spec.family) {
        case Family::Schoices: {
            require(m == 2, "schoices is an m=2 family");
            auto words = detail::schoices_words();
            require(spec.index >= 1 && spec.index <= 6, "schoices index in 1..6");
            out.op = tensor_word(words[spec.index - 1], ss, d);
            break;
        }
        case Family::Qpe: {
            require(m == 3, "qpe is an m=3 family");
            auto words = detail::qpe_words();
            require(spec.index >= 1 && spec.index <= 12, "qpe index in 1..12");
            out.op = tensor_word(words[spec.index - 1], ss, d);
            break;
        }
        case Family::Qghz: {
            require(m == 3, "qghz is an m=3 family");
            auto words = detail::qghz_words();
            require(spec.index >= 1 && spec.index <= 8, "qghz index in 1..8");
            out.op = tensor_word(words[spec.index - 1], ss, d);
            break;
        }
        case Family::Qw: {
            require(m == 3, "qw is an m=3 family");
            auto words = detail::qw_words();
            require(spec.index >= 1 && spec.index <= 8, "qw index in 1..8");
            out.op = tensor_word(words[spec.index - 1].first, ss, d) +
                     tensor_word(words[spec.index - 1].second, ss, d);
            break;
        }
        case Family::MProduct: {
            require(spec.r >= 0 && spec.r < m, "mproduct: r in 0..m-1");
            std::vector<SiteOp> word(static_cast<std::size_t>(m), SiteOp::W);
            word[static_cast<std::size_t>(spec.r)] = spec.dag ? SiteOp::Qd : SiteOp::Q;
            out.op = tensor_word(word, ss, d);
            break;
        }
        case Family::Qir: {
            require(spec.r >= 2 && spec.r <= m - 1, "qir: r in 2..m-1");
            std::vector<int> sites = spec.sites;
            if (sites.empty()) {
                sites.resize(static_cast<std::size_t>(spec.r));
                std::iota(sites.begin(), sites.end(), 0);
            }
            require(static_cast<int>(sites.size()) == spec.r, "qir: need r sites");
            std::string sig = spec.sig.empty()
                                  ? std::string(static_cast<std::size_t>(spec.r), '0')
                                  : spec.sig;
            require(static_cast<int>(sig.size()) == spec.r, "qir: signature length != r");
            std::vector<SiteOp> word(static_cast<std::size_t>(m), SiteOp::W);
            for (int j = 0; j < spec.r; ++j) {
                int site = sites[static_cast<std::size_t>(j)];
                require(site >= 0 && site < m, "qir: site out of range");
                require(word[static_cast<std::size_t>(site)] == SiteOp::W,
                        "qir: duplicate site");
                word[static_cast<std::size_t>(site)] =
                    sig[static_cast<std::size_t>(j)] == '1' ? SiteOp::Qd : SiteOp::Q;
            }
            out.op = tensor_word(word, ss, d);
            break;
        }
        case Family::MGhz: {
            std::string sig =
                spec.sig.empty() ? std::string(static_cast<std::size_t>(m), '0') : spec.sig;
            require(static_cast<int>(sig.size()) == m, "mghz: signature length != m");
            std::vector<SiteOp> word;
            for (char c : sig) word.push_back(c == '1' ? SiteOp::Qd : SiteOp::Q);
            out.op = tensor_word(word, ss, d);
            break;
        }
        case Family::MWState: {
            DenseOperator acc = DenseOperator::zero(d, m);
            for (int r = 0; r <= m - 2; ++r) {
                std::vector<SiteOp> word(static_cast<std::size_t>(m), SiteOp::B);
                word[static_cast<std::size_t>(r)] = SiteOp::Qd;
                word[static_cast<std::size_t>(m - 1)] = SiteOp::Q;
                acc += tensor_word(word, ss, d);
            }
            out.op = acc;
            break;
        }
        case Family::Uq1: {
            require(m == 2, "uq1 is an m=2 family");
            auto w = weights_or_ones(2);
            out.op = sum_words({{w[0], {SiteOp::B, SiteOp::Q}},
                                {w[1], {SiteOp::Qd, SiteOp::F}}},
                               detail::weight_norm(w));
            out.kind = ChargeKind::UnitaryProjector;
            break;
        }
        case Family::Uq2: {
            require(m == 2, "uq2 is an m=2 family");
            auto w = weights_or_ones(2);
            out.op = sum_words({{w[0], {SiteOp::F, SiteOp::Q}},
                                {w[1], {SiteOp::Q, SiteOp::F}}},
                               detail::weight_norm(w));
            out.kind = ChargeKind::UnitaryProjector;
            break;
        }
        case Family::Uq3: {
            require(m == 3, "uq3 is an m=3 family");
            auto w = weights_or_ones(2);
            out.op = sum_words({{w[0], {SiteOp::B, SiteOp::Q, SiteOp::Q}},
                                {w[1], {SiteOp::Qd, SiteOp::F, SiteOp::F}}},
                               detail::weight_norm(w));
            out.kind = ChargeKind::UnitaryProjector;
            break;
        }
        case Family::Uq4: {
            require(m == 3, "uq4 is an m=3 family");
            auto w = weights_or_ones(3);
            out.op = sum_words({{w[0], {SiteOp::B, SiteOp::B, SiteOp::Qd}},
                                {w[1], {SiteOp::B, SiteOp::Qd, SiteOp::B}},
                                {w[2], {SiteOp::Qd, SiteOp::B, SiteOp::B}}},
                               detail::weight_norm(w));
            out.kind = ChargeKind::UnitaryProjector;
            break;
        }
        case Family::Uq5: {
            require(m == 3, "uq5 is an m=3 family");
            auto w = weights_or_ones(3);
            out.op = sum_words({{w[0], {SiteOp::Qd, SiteOp::Qd, SiteOp::Qd}},
                                {w[1], {SiteOp::B, SiteOp::B, SiteOp::Qd}},
                                {w[2], {SiteOp::B, SiteOp::Qd, SiteOp::B}}},
                               detail::weight_norm(w));
            out.kind = ChargeKind::UnitaryProjector;
            break;
        }
        case Family::Uq6: {
            require(m == 3, "uq6 is an m=3 family");
            auto w = weights_or_ones(2);
            out.op = sum_words({{w[0], {SiteOp::Q, SiteOp::Q, SiteOp::Q}},
                                {w[1], {SiteOp::Q, SiteOp::F, SiteOp::F}}},
                               detail::weight_norm(w));
            out.kind = ChargeKind::UnitaryProjector;
            break;
        }
        case Family::Uq7: {
            require(m == 3, "uq7 is an m=3 family");
            auto w = weights_or_ones(2);
            out.op = sum_words({{w[0], {SiteOp::Q, SiteOp::Q, SiteOp::Q}},
                                {w[1], {SiteOp::F, SiteOp::Q, SiteOp::F}}},
                               detail::weight_norm(w));
            out.kind = ChargeKind::UnitaryProjector;
            break;
        }
        case Family::Uq8: {
            require(m == 3, "uq8 is an m=3 family");
            auto w = weights_or_ones(2);
            out.op = sum_words({{w[0], {SiteOp::Q, SiteOp::Q, SiteOp::Q}},
                                {w[1], {SiteOp::F, SiteOp::F, SiteOp::Q}}},
                               detail::weight_norm(w));
            out.kind = ChargeKind::UnitaryProjector;
            break;
        }
        case Family::Uq9: {
            auto w = weights_or_ones(static_cast<std::size_t>(m));
            std::vector<std::pair<double, std::vector<SiteOp>>> terms;
            for (int r = 0; r < m; ++r) {
                std::vector<SiteOp> word(static_cast<std::size_t>(m), SiteOp::B);
                word[static_cast<std::size_t>(r)] = SiteOp::Qd;
                terms.emplace_back(w[static_cast<std::size_t>(r)], word);
            }
            out.op = sum_words(terms, detail::weight_norm(w));
            out.kind = ChargeKind::UnitaryProjector;
            break;
        }
        case Family::Lowl: {
            // H = product of b/f per signature bit plus the bit-flipped word.
            require(spec.index >= 0 && spec.index < (1 << (m - 1)),
                    "lowl index in 0..2^(m-1)-1");
            std::vector<SiteOp> w1, w2;
            for (int j = 0; j < m; ++j) {
                bool dagged = (spec.index >> (m - 1 - j)) & 1;
                w1.push_back(dagged ? SiteOp::F : SiteOp::B);
                w2.push_back(dagged ? SiteOp::B : SiteOp::F);
            }
            out.op = tensor_word(w1, ss, d) + tensor_word(w2, ss, d);
            out.kind = ChargeKind::Hamiltonian;
            break;
        }
        case Family::AppendixA: {
            require(m == 3, "appendixA is an m=3 family");
            auto w = weights_or_ones(3);
            out.op = sum_words({{w[0], {SiteOp::B, SiteOp::B, SiteOp::Qd}},
                                {w[1], {SiteOp::B, SiteOp::Qd, SiteOp::B}},
                                {w[2], {SiteOp::Qd, SiteOp::B, SiteOp::B}},
                                {w[0], {SiteOp::Q, SiteOp::Q, SiteOp::F}},
                                {w[1], {SiteOp::Q, SiteOp::F, SiteOp::Q}},
                                {w[2], {SiteOp::F, SiteOp::Q, SiteOp::Q}}},
                               1.0);
            out.kind = ChargeKind::UnitaryProjector;
            out.k = 2.0 * (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
            break;
        }
        case Family::Synth:
            throw std::invalid_argument("synth charges come from synthesize_charge");
    }

    if (out.kind == ChargeKind::Nilpotent) {
        const double res = (out.op * out.op).frobenius_norm();
        if (res > 1e-12)
            throw std::logic_error("charge failed nilpotency check, |Q^2| = " +
                                   std::to_string(res));
    }
    return out;
}

/// B = Q Q†, F = Q† Q.
inline std::pair<DenseOperator, DenseOperator> projectors(const ChargeOperator& c) {
    const DenseOperator qd = c.op.adjoint();
    return {c.op * qd, qd * c.op};
}

/// Generator actually fed to the Baxterizer: Q itself for nilpotent charges,
/// B for the unitary families, B + F for appendixA, H as stored for lowl.
inline DenseOperator rmatrix_generator(const ChargeOperator& c) {
    switch (c.kind) {
        case ChargeKind::Nilpotent: return c.op;
        case ChargeKind::Hamiltonian: return c.op;
        case ChargeKind::UnitaryProjector: {
            auto [b, f] = projectors(c);
            if (c.spec.family == Family::AppendixA || c.spec.family == Family::Synth)
                return b + f;
            return b;
        }
    }
    throw std::logic_error("unreachable");
}

/// Basis kets annihilated by both Q and Q†.
inline std::vector<std::size_t> zero_modes(const ChargeOperator& c, double tol = 1e-12) {
    const DenseOperator qd = c.op.adjoint();
    std::vector<std::size_t> out;
    for (std::size_t col = 0; col < c.op.dim(); ++col) {
        double s = 0.0;
        for (std::size_t row = 0; row < c.op.dim(); ++row)
            s += std::norm(c.op(row, col)) + std::norm(qd(row, col));
        if (std::sqrt(s) <= tol) out.push_back(col);
    }
    return out;
}

/// x = -w(q+q†) ox (q+q†)^{ox(m-1)}; equals i sigma_y ox sigma_x for d=2, m=2.
inline DenseOperator extraspecial_generator(int m, int d) {
    if (m < 2 || d < 2) throw std::invalid_argument("extraspecial: m,d >= 2");
    const SusySuite ss = susy_suite(d);
    const DenseOperator qpq = ss.q + ss.q_dag;
    DenseOperator x = cx{-1.0, 0.0} * (ss.w * qpq);
    for (int j = 1; j < m; ++j) x = kron(x, qpq);
    return x;
}

/// Builds the charge flipping |source> to the weighted target superposition
/// (qubits only). Per site: (target,source) bits select b, f, q or q†.
inline ChargeOperator synthesize_charge(
    const std::vector<std::pair<std::string, double>>& target,
    const std::string& source, int m) {
    using detail::require;
    require(m >= 2, "synthesize: m >= 2");
    require(!target.empty() &&
                target.size() <= (static_cast<std::size_t>(1) << m) - 1,
            "synthesize: need 1..2^m-1 target components");
    require(static_cast<int>(source.size()) == m, "synthesize: source length != m");
    const SusySuite ss = susy_suite(2);
    double norm2 = 0.0;
    for (const auto& [ket, wt] : target) {
        require(static_cast<int>(ket.size()) == m, "synthesize: target length != m");
        require(ket != source, "synthesize: source appears among targets");
        norm2 += wt * wt;
    }
    require(norm2 > 0.0, "synthesize: zero target");
    DenseOperator acc = DenseOperator::zero(2, m);
    for (const auto& [ket, wt] : target) {
        std::vector<SiteOp> word;
        for (int j = 0; j < m; ++j) {
            const bool t = ket[static_cast<std::size_t>(j)] == '1';
            const bool s = source[static_cast<std::size_t>(j)] == '1';
            word.push_back(t ? (s ? SiteOp::F : SiteOp::Qd)
                             : (s ? SiteOp::Q : SiteOp::B));
        }
        acc += cx{wt / std::sqrt(norm2), 0.0} * tensor_word(word, ss, 2);
    }
    ChargeSpec spec;
    spec.family = Family::Synth;
    spec.m = m;
    spec.d = 2;
    for (const auto& [ket, wt] : target) spec.weights.push_back(wt);
    return ChargeOperator{acc, spec, ChargeKind::UnitaryProjector, 1.0};
}

// --- catalog enumeration ---

struct CatalogFilter {
    std::optional<Family> family;
    std::optional<int> m;
    std::optional<int> d;
};

/// l-range over which a catalog entry is declared to solve the gYBE.
struct LRange {
    int lo;
    int hi;  // inclusive; capped later by the dimension guard
};

inline LRange declared_l_range(const ChargeSpec& s) {
    switch (s.family) {
        case Family::Uq1:
        case Family::Uq2:
        case Family::Uq3:
        case Family::Uq4:
        case Family::Uq5:
        case Family::Uq6:
        case Family::Uq7:
        case Family::Uq8:
        case Family::Uq9:
        case Family::Synth:
        case Family::AppendixA:
            return {s.m, s.m + 1};
        case Family::Lowl:
            return {1, s.m - 1};
        default:
            return {1, s.m - 1};  // nilpotent families hold for every l < m too
    }
}

inline std::vector<ChargeSpec> catalog_list(const CatalogFilter& filter = {}) {
    std::vector<ChargeSpec> out;
    const int d = filter.d.value_or(2);
    auto emit = [&](ChargeSpec s) {
        s.d = d;
        if (filter.family && *filter.family != s.family) return;
        if (filter.m && *filter.m != s.m) return;
        out.push_back(std::move(s));
    };
    auto indexed = [&](Family f, int m, int count) {
        for (int k = 1; k <= count; ++k) {
            ChargeSpec s;
            s.family = f;
            s.index = k;
            s.m = m;
            emit(s);
        }
    };
    indexed(Family::Schoices, 2, 6);
    indexed(Family::Qpe, 3, 12);
    indexed(Family::Qghz, 3, 8);
    indexed(Family::Qw, 3, 8);
    for (int m : {2, 3, 4}) {
        if (filter.m && *filter.m != m) continue;
        for (int r = 0; r < m; ++r)
            for (bool dag : {false, true}) {
                ChargeSpec s;
                s.family = Family::MProduct;
                s.m = m;
                s.r = r;
                s.dag = dag;
                emit(s);
            }
        for (int r = 2; r < m; ++r) {
            // one representative signature per site combination
            std::vector<int> sites(static_cast<std::size_t>(r));
            std::vector<bool> pick(static_cast<std::size_t>(m), false);
            std::fill(pick.begin(), pick.begin() + r, true);
            do {
                ChargeSpec s;
                s.family = Family::Qir;
                s.m = m;
                s.r = r;
                s.sites.clear();
                for (int j = 0; j < m; ++j)
                    if (pick[static_cast<std::size_t>(j)]) s.sites.push_back(j);
                s.sig.assign(static_cast<std::size_t>(r), '0');
                emit(s);
            } while (std::prev_permutation(pick.begin(), pick.end()));
        }
        {
            ChargeSpec s;
            s.family = Family::MGhz;
            s.m = m;
            s.sig.assign(static_cast<std::size_t>(m), '0');
            emit(s);
        }
        {
            ChargeSpec s;
            s.family = Family::MWState;
            s.m = m;
            emit(s);
        }
        for (int k = 0; k < (1 << (m - 1)); ++k) {
            ChargeSpec s;
            s.family = Family::Lowl;
            s.index = k;
            s.m = m;
            emit(s);
        }
    }
    for (auto [fam, m] : std::initializer_list<std::pair<Family, int>>{
             {Family::Uq1, 2}, {Family::Uq2, 2}, {Family::Uq3, 3},
             {Family::Uq4, 3}, {Family::Uq5, 3}, {Family::Uq6, 3},
             {Family::Uq7, 3}, {Family::Uq8, 3}}) {
        ChargeSpec s;
        s.family = fam;
        s.m = m;
        emit(s);
    }
    for (int m : {2, 3, 4}) {
        ChargeSpec s;
        s.family = Family::Uq9;
        s.m = m;
        emit(s);
    }
    {
        ChargeSpec s;
        s.family = Family::AppendixA;
        s.m = 3;
        emit(s);
    }
    return out;
}

// --- textual spec grammar, e.g. "uq1{a=1,b=2}@d2m2", "qghz.3@d2m3" ---

inline std::string format_charge_spec(const ChargeSpec& s) {
    std::ostringstream os;
    os << family_name(s.family);
    switch (s.family) {
        case Family::Schoices:
        case Family::Qpe:
        case Family::Qghz:
        case Family::Qw:
        case Family::Lowl:
            os << "." << s.index;
            break;
        case Family::MProduct:
            os << "{r=" << s.r << ",dag=" << (s.dag ? 1 : 0) << "}";
            break;
        case Family::Qir: {
            os << "{r=" << s.r << ",sig=" << s.sig << ",sites=";
            for (int site : s.sites) os << site;
            os << "}";
            break;
        }
        case Family::MGhz:
            os << "{sig=" << s.sig << "}";
            break;
        case Family::MWState:
            break;
        default: {
            if (!s.weights.empty()) {
                os << "{";
                for (std::size_t i = 0; i < s.weights.size(); ++i) {
                    if (i) os << ",";
                    os << s.weights[i];
                }
                os << "}";
            }
            break;
        }
    }
    os << "@d" << s.d << "m" << s.m;
    return os.str();
}

inline ChargeSpec parse_charge_spec(const std::string& text) {
    auto fail = [&]() -> ChargeSpec {
        throw std::invalid_argument("bad charge spec: " + text);
    };
    const auto at = text.rfind('@');
    if (at == std::string::npos) return fail();
    const std::string head = text.substr(0, at);
    const std::string tail = text.substr(at + 1);
    int d = 0, m = 0;
    std::size_t consumed = 0;
    if (std::sscanf(tail.c_str(), "d%dm%d%zn", &d, &m, &consumed) != 2 ||
        consumed != tail.size())
        return fail();

    std::string name = head;
    std::string args;
    int index = 0;
    bool has_index = false;
    if (auto brace = head.find('{'); brace != std::string::npos) {
        if (head.back() != '}') return fail();
        name = head.substr(0, brace);
        args = head.substr(brace + 1, head.size() - brace - 2);
    } else if (auto dot = head.find('.'); dot != std::string::npos) {
        name = head.substr(0, dot);
        index = std::stoi(head.substr(dot + 1));
        has_index = true;
    }

    static const std::map<std::string, Family> names = {
        {"schoices", Family::Schoices}, {"qpe", Family::Qpe},
        {"qghz", Family::Qghz},         {"qw", Family::Qw},
        {"mproduct", Family::MProduct}, {"qir", Family::Qir},
        {"mghz", Family::MGhz},         {"mwstate", Family::MWState},
        {"uq1", Family::Uq1},           {"uq2", Family::Uq2},
        {"uq3", Family::Uq3},           {"uq4", Family::Uq4},
        {"uq5", Family::Uq5},           {"uq6", Family::Uq6},
        {"uq7", Family::Uq7},           {"uq8", Family::Uq8},
        {"uq9", Family::Uq9},           {"lowl", Family::Lowl},
        {"appendixA", Family::AppendixA}};
    auto it = names.find(name);
    if (it == names.end()) return fail();

    ChargeSpec s;
    s.family = it->second;
    s.d = d;
    s.m = m;
    if (has_index) s.index = index;

    // args: comma-separated bare numbers (weights) or key=value pairs
    std::istringstream is(args);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            s.weights.push_back(std::stod(item));
            continue;
        }
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        if (key == "r") {
            s.r = std::stoi(val);
        } else if (key == "dag") {
            s.dag = std::stoi(val) != 0;
        } else if (key == "sig") {
            s.sig = val;
        } else if (key == "sites") {
            for (char c : val) s.sites.push_back(c - '0');
        } else if (key == "a" || key == "b" || key == "g" || key.front() == 'a') {
            // a=..,b=..,g=.. ordered weights; a1=..,a2=.. also lands here
            s.weights.push_back(std::stod(val));
        } else {
            return fail();
        }
    }
    return s;
}

}  // namespace gybe
