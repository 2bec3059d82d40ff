#include <catch_amalgamated.hpp>

#include <random>

#include "ruinkit/divided_differences.hpp"
#include "ruinkit/lundberg.hpp"
#include "ruinkit/matrix.hpp"
#include "support.hpp"

using namespace ruinkit;

TEST_CASE("2x2 adjugate identity", "[matrix]") {
    CMatrix m(2, 2);
    m << Cx(1.0, 2.0), Cx(-0.5), Cx(3.0), Cx(0.0, -1.0);
    const CMatrix adj = adjugate(m);
    CHECK(adj(0, 0) == m(1, 1));
    CHECK(adj(0, 1) == -m(0, 1));
    CHECK(adj(1, 0) == -m(1, 0));
    CHECK(adj(1, 1) == m(0, 0));
}

TEST_CASE("adjugate of the identity", "[matrix]") {
    const CMatrix adj = adjugate(CMatrix::Identity(3, 3));
    CHECK((adj - CMatrix::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("adjugate of a 1x1 matrix is [[1]]", "[matrix]") {
    CMatrix m(1, 1);
    m(0, 0) = Cx(7.0, -3.0);
    CHECK(adjugate(m)(0, 0) == Cx(1.0));
}

TEST_CASE("m adj(m) = det(m) I on random matrices", "[matrix]") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int n = 1; n <= 6; ++n) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = Cx(unif(gen), unif(gen));
        const CMatrix prod = m * adjugate(m) - m.determinant() * CMatrix::Identity(n, n);
        const double scale = std::pow(m.norm(), n);
        CHECK(prod.cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, scale));
    }
}

TEST_CASE("adjugate at a determinant root annihilates L", "[matrix]") {
    const RiskModel model = test::coxian_example();
    const LundbergRoots roots = find_roots(model);
    const CMatrix L = eval_L(model, roots.rhos.back());
    const CMatrix prod = L * adjugate(L);
    CHECK(prod.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("divided differences of s^2", "[matrix]") {
    DividedDifferenceTable<Cx> t({Cx(1.0), Cx(2.0)}, {Cx(1.0), Cx(4.0)});
    CHECK(std::abs(t.prefix(1) - Cx(3.0)) < 1e-14);
}

TEST_CASE("divided differences of a constant vanish", "[matrix]") {
    DividedDifferenceTable<Cx> t({Cx(0.0), Cx(1.0), Cx(2.5)}, {Cx(5.0), Cx(5.0), Cx(5.0)});
    CHECK(std::abs(t.prefix(1)) < 1e-14);
    CHECK(std::abs(t.prefix(2)) < 1e-14);
}

TEST_CASE("divided difference of 1/(s+1) over {0, 1}", "[matrix]") {
    DividedDifferenceTable<Cx> t({Cx(0.0), Cx(1.0)}, {Cx(1.0), Cx(0.5)});
    CHECK(std::abs(t.prefix(1) - Cx(-0.5)) < 1e-14);
}

TEST_CASE("divided differences of a polynomial terminate at its degree", "[matrix]") {
    // p(s) = 2 s^3 - s + 4: the 4-node difference is the leading coefficient,
    // the 5-node difference is 0
    const Poly p({Cx(4.0), Cx(-1.0), Cx(0.0), Cx(2.0)});
    const std::vector<Cx> nodes = {Cx(-1.0), Cx(0.3), Cx(1.1), Cx(2.0), Cx(3.7)};
    std::vector<Cx> vals;
    for (Cx x : nodes) vals.push_back(p.eval(x));
    DividedDifferenceTable<Cx> t(nodes, vals);
    CHECK(std::abs(t.prefix(3) - Cx(2.0)) < 1e-9);
    CHECK(std::abs(t.prefix(4)) < 1e-9);
}

TEST_CASE("full-order divided difference is symmetric in the nodes", "[matrix]") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto f = [](Cx s) { return std::exp(-s) / (s + Cx(4.0)); };
    std::vector<Cx> nodes = {Cx(0.0), Cx(0.8, 0.3), Cx(1.9), Cx(2.5, -0.7)};
    std::vector<Cx> vals;
    for (Cx x : nodes) vals.push_back(f(x));
    const Cx reference = DividedDifferenceTable<Cx>(nodes, vals).prefix(3);
    for (int trial = 0; trial < 5; ++trial) {
        for (std::size_t i = nodes.size(); i > 1; --i) {
            const std::size_t j = gen() % i;
            std::swap(nodes[i - 1], nodes[j]);
            std::swap(vals[i - 1], vals[j]);
        }
        const Cx permuted = DividedDifferenceTable<Cx>(nodes, vals).prefix(3);
        CHECK(std::abs(permuted - reference) <= 1e-9 * std::max(1.0, std::abs(reference)));
    }
    (void)unif;
}

TEST_CASE("coincident nodes are rejected", "[matrix]") {
    CHECK_THROWS_AS(DividedDifferenceTable<Cx>({Cx(1.0), Cx(1.0 + 1e-9)}, {Cx(0.0), Cx(0.0)}),
                    DegenerateRoots);
}

TEST_CASE("matrix-valued divided differences use the same recursion", "[matrix]") {
    // entries of the table for F(s) = [[s^2, 1], [0, s]] over {0, 1, 3}
    auto F = [](Cx s) {
        CMatrix m(2, 2);
        m << s * s, Cx(1.0), Cx(0.0), s;
        return m;
    };
    const std::vector<Cx> nodes = {Cx(0.0), Cx(1.0), Cx(3.0)};
    std::vector<CMatrix> vals;
    for (Cx x : nodes) vals.push_back(F(x));
    DividedDifferenceTable<CMatrix> t(nodes, vals);
    CHECK(std::abs(t.prefix(2)(0, 0) - Cx(1.0)) < 1e-14); // second difference of s^2
    CHECK(std::abs(t.prefix(2)(1, 1)) < 1e-14);           // second difference of s
}

TEST_CASE("Faddeev-LeVerrier expansion matches direct evaluation", "[matrix]") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int n = 1; n <= 4; ++n) {
        CMatrix A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = Cx(unif(gen), unif(gen));
        const CharPolyExpansion fl = faddeev_leverrier(A);
        for (int k = 0; k < 5; ++k) {
            const Cx s(unif(gen) * 3.0, unif(gen) * 3.0);
            const CMatrix M = s * CMatrix::Identity(n, n) - A;
            CHECK(std::abs(fl.char_poly.eval(s) - M.determinant()) <
                  1e-10 * std::max(1.0, std::abs(M.determinant())));
            CHECK((fl.adj_at(s) - adjugate(M)).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, M.norm()));
        }
    }
}
