#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gybe/baxter.hpp"
#include "gybe/tensor.hpp"

namespace gybe {

struct SloccLabel {
    int sites = 0;
    std::string cls;            // "product", "bell", "A-B-C", ..., "GHZ", "W",
                                // rank-signature descriptor, or "unclassified"
    std::vector<int> ranks;
    double tangle = -1.0;       // three-tangle; -1 when not applicable
    std::string provenance;
};

inline nlohmann::json to_json(const SloccLabel& l) {
    nlohmann::json j{{"class", l.cls}, {"ranks", l.ranks}, {"provenance", l.provenance}};
    if (l.tangle >= 0.0) j["tangle"] = l.tangle;
    return j;
}

/// Single-site reduced density matrix (site is 1-based); input must be
/// normalized.
inline DenseOperator reduced_density(const StateVector& s, int site) {
    if (site < 1 || site > s.sites()) throw std::out_of_range("reduced_density: site");
    if (std::abs(s.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("reduced_density: state not normalized");
    const int d = s.local_dim();
    std::size_t inner = 1;
    for (int j = site; j < s.sites(); ++j) inner *= static_cast<std::size_t>(d);
    std::size_t outer = s.dim() / (inner * static_cast<std::size_t>(d));
    DenseOperator rho(d, 1);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < inner; ++i)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    const std::size_t ia =
                        (o * static_cast<std::size_t>(d) + static_cast<std::size_t>(a)) *
                            inner + i;
                    const std::size_t ib =
                        (o * static_cast<std::size_t>(d) + static_cast<std::size_t>(b)) *
                            inner + i;
                    rho.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) +=
                        s[ia] * std::conj(s[ib]);
                }
    return rho;
}

/// Eigenvalues of a small hermitian matrix by cyclic Jacobi rotations.
inline std::vector<double> hermitian_eigenvalues(DenseOperator a) {
    const std::size_t n = a.dim();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const cx apq = a(p, q);
                if (std::abs(apq) < 1e-18) continue;
                const double app = a(p, p).real(), aqq = a(q, q).real();
                // phase so that the rotated off-diagonal element is real
                const cx phase = apq / std::abs(apq);
                const double theta =
                    0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
                const double c = std::cos(theta), s = std::sin(theta);
                const cx sp = s * phase;
                for (std::size_t r = 0; r < n; ++r) {
                    const cx arp = a(r, p), arq = a(r, q);
                    a.at(r, p) = c * arp + std::conj(sp) * arq;
                    a.at(r, q) = -sp * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const cx apr = a(p, r), aqr = a(q, r);
                    a.at(p, r) = c * apr + sp * aqr;
                    a.at(q, r) = -std::conj(sp) * apr + c * aqr;
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

/// Rank of each single-site reduced density: eigenvalues above tol times the
/// largest count.
inline std::vector<int> local_ranks(const StateVector& s, double tol = 1e-8) {
    std::vector<int> ranks;
    for (int site = 1; site <= s.sites(); ++site) {
        const auto ev = hermitian_eigenvalues(reduced_density(s, site));
        const double top = std::max(ev.front(), 1e-300);
        int r = 0;
        for (double v : ev)
            if (v > tol * top) ++r;
        ranks.push_back(r);
    }
    return ranks;
}

/// tau = 4 |Hdet| of the 2x2x2 amplitude tensor.
inline double three_tangle(const StateVector& s) {
    if (s.sites() != 3 || s.local_dim() != 2)
        throw std::invalid_argument("three_tangle: three qubits required");
    auto a = [&](int i, int j, int k) { return s[static_cast<std::size_t>(4 * i + 2 * j + k)]; };
    const cx d1 = a(0, 0, 0) * a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 1) +
                  a(0, 0, 1) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 0) +
                  a(0, 1, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 0, 1) +
                  a(1, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(0, 1, 1);
    const cx d2 = a(0, 0, 0) * a(1, 1, 1) * a(0, 1, 1) * a(1, 0, 0) +
                  a(0, 0, 0) * a(1, 1, 1) * a(1, 0, 1) * a(0, 1, 0) +
                  a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 0) * a(0, 0, 1) +
                  a(0, 1, 1) * a(1, 0, 0) * a(1, 0, 1) * a(0, 1, 0) +
                  a(0, 1, 1) * a(1, 0, 0) * a(1, 1, 0) * a(0, 0, 1) +
                  a(1, 0, 1) * a(0, 1, 0) * a(1, 1, 0) * a(0, 0, 1);
    const cx d3 = a(0, 0, 0) * a(0, 1, 1) * a(1, 0, 1) * a(1, 1, 0) +
                  a(1, 1, 1) * a(1, 0, 0) * a(0, 1, 0) * a(0, 0, 1);
    return 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
}

/// Effective-qubit reduction of a qutrit state supported on {|1>,|2>} per
/// site. Any |0> amplitude blocks the reduction.
inline std::optional<StateVector> reduce_qutrit(const StateVector& s, double tol = 1e-12) {
    if (s.local_dim() != 3) return std::nullopt;
    StateVector out(2, s.sites());
    for (std::size_t idx = 0; idx < s.dim(); ++idx) {
        if (std::abs(s[idx]) <= tol) continue;
        std::size_t rem = idx, mapped = 0;
        std::vector<int> digits(static_cast<std::size_t>(s.sites()));
        for (int j = s.sites() - 1; j >= 0; --j) {
            digits[static_cast<std::size_t>(j)] = static_cast<int>(rem % 3);
            rem /= 3;
        }
        for (int dgt : digits) {
            if (dgt == 0) return std::nullopt;
            mapped = mapped * 2 + static_cast<std::size_t>(dgt - 1);
        }
        out.at(mapped) = s[idx];
    }
    return out.normalized();
}

inline std::string rank_descriptor(const std::vector<int>& ranks) {
    std::string s = "rank-";
    for (int r : ranks) s += std::to_string(r);
    return s;
}

inline SloccLabel classify(const StateVector& input, double tol = 1e-8) {
    StateVector s = input.normalized();
    if (s.local_dim() == 3) {
        if (auto red = reduce_qutrit(s)) {
            SloccLabel l = classify(*red, tol);
            l.provenance = "effective-qubit";
            return l;
        }
        SloccLabel l;
        l.sites = s.sites();
        l.ranks = local_ranks(s, tol);
        l.cls = "unclassified";
        return l;
    }
    if (s.local_dim() != 2)
        throw std::invalid_argument("classification defined for qubits (d=2) only");
    SloccLabel l;
    l.sites = s.sites();
    l.ranks = local_ranks(s, tol);
    if (s.sites() == 2) {
        l.cls = (l.ranks[0] == 2 && l.ranks[1] == 2) ? "bell" : "product";
        return l;
    }
    if (s.sites() == 3) {
        const int n1 = static_cast<int>(std::count(l.ranks.begin(), l.ranks.end(), 1));
        l.tangle = three_tangle(s);
        if (n1 == 3) {
            l.cls = "A-B-C";
        } else if (n1 == 1) {
            if (l.ranks[0] == 1)
                l.cls = "A-BC";
            else if (l.ranks[1] == 1)
                l.cls = "AC-B";
            else
                l.cls = "AB-C";
        } else {
            l.cls = l.tangle > tol ? "GHZ" : "W";
        }
        return l;
    }
    l.cls = rank_descriptor(l.ranks);
    return l;
}

/// U = (1/sqrt N) sum_k (prod_{j<k} sigma_z_j) sigma_x_k; U^2 = I, U = U†.
inline DenseOperator w_unitary(int n) {
    if (n < 1) throw std::invalid_argument("w_unitary: N >= 1");
    DenseOperator sx(2, 1), sz(2, 1);
    sx.at(0, 1) = 1.0;
    sx.at(1, 0) = 1.0;
    sz.at(0, 0) = 1.0;
    sz.at(1, 1) = -1.0;
    DenseOperator u = DenseOperator::zero(2, n);
    for (int k = 1; k <= n; ++k) {
        DenseOperator chi = (k == 1) ? DenseOperator::identity(2, 0) : sz;
        for (int j = 2; j < k; ++j) chi = kron(chi, sz);
        chi = (k == 1) ? sx : kron(chi, sx);
        u += embed(chi, 1, n);
    }
    u *= cx{1.0 / std::sqrt(static_cast<double>(n)), 0.0};
    return u;
}

inline cx determinant(const DenseOperator& a) {
    const std::size_t n = a.dim();
    std::vector<cx> m(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m[r * n + c] = a(r, c);
    cx det{1.0, 0.0};
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
        if (std::abs(m[piv * n + col]) == 0.0) return cx{0.0, 0.0};
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m[piv * n + c], m[col * n + c]);
            det = -det;
        }
        det *= m[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const cx f = m[r * n + col] / m[col * n + col];
            for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
        }
    }
    return det;
}

/// (L_1 ox ... ox L_N)|state>, normalized. Every factor must be invertible.
inline StateVector ilo_apply(const StateVector& s,
                             const std::vector<DenseOperator>& factors) {
    if (static_cast<int>(factors.size()) != s.sites())
        throw std::invalid_argument("ilo_apply: one factor per site required");
    DenseOperator full = DenseOperator::identity(s.local_dim(), 0);
    for (const auto& f : factors) {
        if (f.sites() != 1 || f.local_dim() != s.local_dim())
            throw std::invalid_argument("ilo_apply: factors must be single-site");
        if (std::abs(determinant(f)) < 1e-12)
            throw std::invalid_argument("ilo_apply: singular local operator");
        full = kron(full, f);
    }
    return apply(full, s).normalized();
}

struct ApplyResult {
    StateVector raw;
    StateVector normalized;
};

/// Embeds R(u) at the given 1-based position of an N-site space and applies
/// it to the input state.
inline ApplyResult apply_r(const RMatrixFun& r, cx u, const StateVector& input,
                           int position = 1) {
    const DenseOperator op = embed(r(u), position, input.sites());
    StateVector raw = apply(op, input);
    return ApplyResult{raw, raw.normalized()};
}

// --- state file format: one line per basis ket, "label re im" ---

inline void write_state(std::ostream& os, const StateVector& s) {
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const cx v = s[i];
        os << s.label_of(i) << " ";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g %.17g", v.real(), v.imag());
        os << buf << "\n";
    }
}

inline StateVector read_state(std::istream& is) {
    std::string line;
    std::vector<std::pair<std::string, cx>> rows;
    int d = 2;
    int sites = -1;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string label;
        double re = 0.0, im = 0.0;
        if (!(ls >> label >> re >> im))
            throw std::invalid_argument("malformed state line: " + line);
        if (sites < 0)
            sites = static_cast<int>(label.size());
        else if (static_cast<int>(label.size()) != sites)
            throw std::invalid_argument("inconsistent ket label length: " + label);
        for (char c : label) {
            if (c < '0' || c > '9')
                throw std::invalid_argument("bad ket label: " + label);
            d = std::max(d, c - '0' + 1);
        }
        rows.emplace_back(label, cx{re, im});
    }
    if (sites < 0) throw std::invalid_argument("empty state file");
    StateVector s(d, sites);
    for (const auto& [label, v] : rows) {
        std::size_t idx = 0;
        for (char c : label) idx = idx * static_cast<std::size_t>(d) +
                                   static_cast<std::size_t>(c - '0');
        s.at(idx) += v;
    }
    return s;
}

}  // namespace gybe
