#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "gybe/slocc.hpp"

using namespace gybe;

namespace {

ChargeOperator charge(Family f, int index, int m, int d,
                      std::vector<double> weights = {}) {
    ChargeSpec s;
    s.family = f;
    s.index = index;
    s.m = m;
    s.d = d;
    s.weights = std::move(weights);
    return build(s);
}

// Partial-trace oracle: rho_ab = sum over all other-site digit strings.
DenseOperator reduced_density_oracle(const StateVector& s, int site) {
    const int d = s.local_dim();
    const int n = s.sites();
    DenseOperator rho(d, 1);
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (std::size_t j = 0; j < s.dim(); ++j) {
            const std::string li = s.label_of(i), lj = s.label_of(j);
            bool same = true;
            for (int k = 0; k < n; ++k)
                if (k != site - 1 && li[static_cast<std::size_t>(k)] !=
                                         lj[static_cast<std::size_t>(k)])
                    same = false;
            if (!same) continue;
            rho.at(static_cast<std::size_t>(li[static_cast<std::size_t>(site - 1)] - '0'),
                   static_cast<std::size_t>(lj[static_cast<std::size_t>(site - 1)] - '0')) +=
                s[i] * std::conj(s[j]);
        }
    return rho;
}

// Hyperdeterminant oracle via the discriminant of det(A0 + z A1).
double three_tangle_oracle(const StateVector& s) {
    auto amp = [&](int i, int j, int k) {
        return s[static_cast<std::size_t>(4 * i + 2 * j + k)];
    };
    auto slice_det = [&](cx z) {
        const cx m00 = amp(0, 0, 0) + z * amp(1, 0, 0);
        const cx m01 = amp(0, 0, 1) + z * amp(1, 0, 1);
        const cx m10 = amp(0, 1, 0) + z * amp(1, 1, 0);
        const cx m11 = amp(0, 1, 1) + z * amp(1, 1, 1);
        return m00 * m11 - m01 * m10;
    };
    const cx c = slice_det(cx{0.0, 0.0});
    const cx f1 = slice_det(cx{1.0, 0.0});
    const cx fm1 = slice_det(cx{-1.0, 0.0});
    const cx a = (f1 + fm1) / 2.0 - c;
    const cx b = (f1 - fm1) / 2.0;
    return 4.0 * std::abs(b * b - 4.0 * a * c);
}

StateVector make_state(int d, int sites, std::vector<cx> amps) {
    StateVector s(d, sites);
    for (std::size_t i = 0; i < amps.size(); ++i) s.at(i) = amps[i];
    return s.normalized();
}

DenseOperator random_ilo(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (;;) {
        DenseOperator f(2, 1);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c) f.at(r, c) = cx{dist(rng), dist(rng)};
        if (std::abs(determinant(f)) > 0.2) return f;
    }
}

}  // namespace

TEST_CASE("hermitian eigenvalues match power-sum invariants") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int d : {2, 3, 4}) {
        DenseOperator m(d, 1);
        for (std::size_t r = 0; r < m.dim(); ++r)
            for (std::size_t c = 0; c < m.dim(); ++c)
                m.at(r, c) = cx{dist(rng), dist(rng)};
        const DenseOperator a = m + m.adjoint();
        REQUIRE(a.is_hermitian(1e-12));
        const auto ev = hermitian_eigenvalues(a);
        double s1 = 0.0, s2 = 0.0, s3 = 0.0;
        for (double v : ev) {
            s1 += v;
            s2 += v * v;
            s3 += v * v * v;
        }
        CHECK(s1 == Catch::Approx(a.trace_real()).margin(1e-10));
        CHECK(s2 == Catch::Approx((a * a).trace_real()).margin(1e-10));
        CHECK(s3 == Catch::Approx((a * a * a).trace_real()).margin(1e-9));
        CHECK(std::is_sorted(ev.rbegin(), ev.rend()));
    }
    // known spectrum: sigma_x has eigenvalues +1, -1
    DenseOperator sx(2, 1);
    sx.at(0, 1) = 1.0;
    sx.at(1, 0) = 1.0;
    const auto ev = hermitian_eigenvalues(sx);
    CHECK(ev[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(ev[1] == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("reduced density against the label-matching oracle") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
        StateVector s(2, 3);
        for (std::size_t i = 0; i < s.dim(); ++i) s.at(i) = cx{dist(rng), dist(rng)};
        s = s.normalized();
        for (int site = 1; site <= 3; ++site)
            CHECK(frobenius_distance(reduced_density(s, site),
                                     reduced_density_oracle(s, site)) < 1e-12);
    }
    StateVector q(3, 2);
    for (std::size_t i = 0; i < q.dim(); ++i) q.at(i) = cx{dist(rng), dist(rng)};
    q = q.normalized();
    for (int site = 1; site <= 2; ++site)
        CHECK(frobenius_distance(reduced_density(q, site),
                                 reduced_density_oracle(q, site)) < 1e-12);
    CHECK_THROWS_AS(reduced_density(StateVector::basis_ket(2, "00"), 3),
                    std::out_of_range);
    StateVector unnorm(2, 1);
    unnorm.at(0) = cx{2.0, 0.0};
    CHECK_THROWS_AS(reduced_density(unnorm, 1), std::invalid_argument);
}

TEST_CASE("reduced densities of standard states") {
    const double r2 = 1.0 / std::sqrt(2.0);
    const auto bell = make_state(2, 2, {cx{r2, 0.0}, {}, {}, cx{r2, 0.0}});
    for (int site : {1, 2}) {
        const auto rho = reduced_density(bell, site);
        CHECK(frobenius_distance(rho, cx{0.5, 0.0} * DenseOperator::identity(2, 1)) <
              1e-14);
    }
    const auto prod = StateVector::basis_ket(2, "000");
    const auto rho = reduced_density(prod, 2);
    CHECK(std::abs(rho(0, 0) - cx{1.0, 0.0}) < 1e-15);
    CHECK(local_ranks(prod) == std::vector<int>{1, 1, 1});
    const auto abc = make_state(2, 3, {cx{r2, 0.0}, {}, {}, cx{r2, 0.0}, {}, {}, {}, {}});
    CHECK(local_ranks(abc) == std::vector<int>{1, 2, 2});  // |000> + |011>
}

TEST_CASE("three-tangle agrees with the discriminant oracle") {
    const double r2 = 1.0 / std::sqrt(2.0), r3 = 1.0 / std::sqrt(3.0);
    const auto ghz = make_state(2, 3, {cx{r2, 0.0}, {}, {}, {}, {}, {}, {}, cx{r2, 0.0}});
    CHECK(three_tangle(ghz) == Catch::Approx(1.0).margin(1e-12));
    CHECK(three_tangle_oracle(ghz) == Catch::Approx(1.0).margin(1e-12));

    const auto w = make_state(2, 3, {{}, cx{r3, 0.0}, cx{r3, 0.0}, {}, cx{r3, 0.0}, {}, {}, {}});
    CHECK(three_tangle(w) < 1e-12);
    CHECK(three_tangle_oracle(w) < 1e-12);

    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        StateVector s(2, 3);
        for (std::size_t i = 0; i < 8; ++i) s.at(i) = cx{dist(rng), dist(rng)};
        s = s.normalized();
        CHECK(three_tangle(s) == Catch::Approx(three_tangle_oracle(s)).margin(1e-10));
    }
    CHECK_THROWS_AS(three_tangle(StateVector(2, 2)), std::invalid_argument);
}

TEST_CASE("classification of reference states") {
    const double r2 = 1.0 / std::sqrt(2.0), r3 = 1.0 / std::sqrt(3.0);
    CHECK(classify(StateVector::basis_ket(2, "01")).cls == "product");
    CHECK(classify(make_state(2, 2, {cx{r2, 0.0}, {}, {}, cx{r2, 0.0}})).cls == "bell");
    CHECK(classify(StateVector::basis_ket(2, "010")).cls == "A-B-C");
    const auto ghz = make_state(2, 3, {cx{r2, 0.0}, {}, {}, {}, {}, {}, {}, cx{r2, 0.0}});
    CHECK(classify(ghz).cls == "GHZ");
    const auto w = make_state(2, 3, {{}, cx{r3, 0.0}, cx{r3, 0.0}, {}, cx{r3, 0.0}, {}, {}, {}});
    const auto lw = classify(w);
    CHECK(lw.cls == "W");
    CHECK(lw.ranks == std::vector<int>{2, 2, 2});
    CHECK(classify(make_state(2, 3, {cx{r2, 0.0}, {}, {}, cx{r2, 0.0}, {}, {}, {}, {}}))
              .cls == "A-BC");
    CHECK(classify(make_state(2, 3, {cx{r2, 0.0}, {}, {}, {}, {}, cx{r2, 0.0}, {}, {}}))
              .cls == "AC-B");
    CHECK(classify(make_state(2, 3, {cx{r2, 0.0}, {}, {}, {}, {}, {}, cx{r2, 0.0}, {}}))
              .cls == "AB-C");
    // four sites fall back to the rank signature
    const auto ghz4 = make_state(2, 4, [] {
        std::vector<cx> v(16);
        v[0] = v[15] = cx{1.0, 0.0};
        return v;
    }());
    CHECK(classify(ghz4).cls == "rank-2222");
}

TEST_CASE("qutrit states reduce to effective qubits when |0> is absent") {
    // (|11> + |12> + |21> + |22>)/2 -> |++> : a product state of two qubits
    StateVector s(3, 2);
    s.at(4) = s.at(5) = s.at(7) = s.at(8) = cx{0.5, 0.0};
    const auto l = classify(s);
    CHECK(l.cls == "product");
    CHECK(l.provenance == "effective-qubit");

    // |11> + |22> -> Bell
    StateVector b(3, 2);
    b.at(4) = b.at(8) = cx{1.0, 0.0};
    CHECK(classify(b.normalized()).cls == "bell");

    // any |0> support blocks the reduction
    const auto blocked = classify(StateVector::basis_ket(3, "01"));
    CHECK(blocked.cls == "unclassified");
    CHECK(blocked.ranks == std::vector<int>{1, 1});
}

TEST_CASE("W-flavoured involution builds the uniform one-excitation state") {
    for (int n : {1, 2, 3, 4}) {
        const auto u = w_unitary(n);
        CHECK(frobenius_distance(u * u, DenseOperator::identity(2, n)) < 1e-13);
        CHECK(u.is_hermitian(1e-13));
        const auto out = apply(u, StateVector::basis_ket(2, n, 0));
        const double amp = 1.0 / std::sqrt(static_cast<double>(n));
        for (int k = 0; k < n; ++k) {
            const std::size_t idx = std::size_t{1} << (n - 1 - k);
            CHECK(std::abs(out[idx] - cx{amp, 0.0}) < 1e-14);
        }
    }
    const auto w3 = apply(w_unitary(3), StateVector::basis_ket(2, "000"));
    CHECK(classify(w3).cls == "W");
}

TEST_CASE("classification is invariant under invertible local operators") {
    const double r2 = 1.0 / std::sqrt(2.0), r3 = 1.0 / std::sqrt(3.0);
    const std::vector<std::pair<StateVector, std::string>> refs = {
        {StateVector::basis_ket(2, "01"), "product"},
        {make_state(2, 2, {cx{r2, 0.0}, {}, {}, cx{r2, 0.0}}), "bell"},
        {make_state(2, 3, {cx{r2, 0.0}, {}, {}, {}, {}, {}, {}, cx{r2, 0.0}}), "GHZ"},
        {make_state(2, 3, {{}, cx{r3, 0.0}, cx{r3, 0.0}, {}, cx{r3, 0.0}, {}, {}, {}}),
         "W"},
        {make_state(2, 3, {cx{r2, 0.0}, {}, {}, cx{r2, 0.0}, {}, {}, {}, {}}), "A-BC"},
    };
    std::mt19937_64 rng(34);
    for (const auto& [state, cls] : refs) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<DenseOperator> factors;
            for (int site = 0; site < state.sites(); ++site)
                factors.push_back(random_ilo(rng));
            CHECK(classify(ilo_apply(state, factors)).cls == cls);
        }
    }
    // explicit example: sigma_x on the second qubit swaps the Bell basis
    DenseOperator sx(2, 1);
    sx.at(0, 1) = 1.0;
    sx.at(1, 0) = 1.0;
    const auto psi1 = make_state(2, 2, {cx{r2, 0.0}, {}, {}, cx{r2, 0.0}});
    const auto mapped = ilo_apply(psi1, {DenseOperator::identity(2, 1), sx});
    CHECK(std::abs(mapped[1] - cx{r2, 0.0}) < 1e-14);
    CHECK(std::abs(mapped[2] - cx{r2, 0.0}) < 1e-14);
    DenseOperator sing(2, 1);
    sing.at(0, 0) = 1.0;
    CHECK_THROWS_AS(ilo_apply(psi1, {sing, sx}), std::invalid_argument);
}

TEST_CASE("spectral operators drive product states into the declared classes") {
    const cx it{0.0, M_PI / 2.0};
    // bell from the two-site projector R
    const auto uq1 = rmatrix_for(charge(Family::Uq1, 0, 2, 2), 1.0);
    CHECK(classify(apply_r(uq1, it, StateVector::basis_ket(2, "00")).normalized).cls ==
          "bell");
    // GHZ with unit tangle at alpha = beta
    const auto uq3 = rmatrix_for(charge(Family::Uq3, 0, 3, 2), 1.0);
    const auto g = classify(apply_r(uq3, it, StateVector::basis_ket(2, "000")).normalized);
    CHECK(g.cls == "GHZ");
    CHECK(g.tangle == Catch::Approx(1.0).margin(1e-10));
    // W with vanishing tangle
    const auto uq4 = rmatrix_for(charge(Family::Uq4, 0, 3, 2), 1.0);
    const auto lw = classify(apply_r(uq4, it, StateVector::basis_ket(2, "001")).normalized);
    CHECK(lw.cls == "W");
    CHECK(lw.tangle < 1e-10);
    // nilpotent R leaves unrelated kets alone
    const auto nil = baxterize_nilpotent(charge(Family::Schoices, 3, 2, 2).op, 1.0);
    const auto res = apply_r(nil, cx{0.8, 0.0}, StateVector::basis_ket(2, "01"));
    CHECK(state_distance(res.raw, StateVector::basis_ket(2, "01")) < 1e-15);
    // position embedding: act on sites 2..3 of a three-site space
    const auto wide =
        apply_r(uq1, it, StateVector::basis_ket(2, "100"), 2).normalized;
    CHECK(classify(wide).cls == "A-BC");  // site 1 untouched, sites 2-3 entangled
}

TEST_CASE("state files round trip and reject malformed input") {
    const double r3 = 1.0 / std::sqrt(3.0);
    const auto w = make_state(2, 3, {{}, cx{r3, 0.0}, cx{r3, 0.0}, {}, cx{r3, 0.0}, {}, {}, {}});
    std::ostringstream os;
    write_state(os, w);
    std::istringstream is(os.str());
    const auto back = read_state(is);
    CHECK(back.local_dim() == 2);
    CHECK(back.sites() == 3);
    CHECK(state_distance(w, back) < 1e-15);

    std::istringstream qt("# comment\n12 0.5 0\n21 0.5 -0.5\n");
    const auto q = read_state(qt);
    CHECK(q.local_dim() == 3);
    CHECK(std::abs(q[5] - cx{0.5, 0.0}) < 1e-15);

    std::istringstream bad1("01 nope 0\n");
    CHECK_THROWS_AS(read_state(bad1), std::invalid_argument);
    std::istringstream bad2("01 1 0\n001 1 0\n");
    CHECK_THROWS_AS(read_state(bad2), std::invalid_argument);
    std::istringstream bad3("");
    CHECK_THROWS_AS(read_state(bad3), std::invalid_argument);
}
