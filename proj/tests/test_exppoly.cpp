#include <catch_amalgamated.hpp>

#include <random>

#include "ruinkit/divided_differences.hpp"
#include "ruinkit/exppoly.hpp"
#include "support.hpp"

using namespace ruinkit;

namespace {

ExpPoly random_exppoly(std::mt19937_64& gen, int nterms = 3) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<ExpPoly::Term> terms;
    double rate = 0.3 + unif(gen);
    for (int k = 0; k < nterms; ++k) {
        terms.push_back({Cx(2.0 * unif(gen) - 1.0, 0.0), Cx(rate), static_cast<int>(gen() % 3)});
        rate *= 1.6 + unif(gen);
    }
    return ExpPoly(std::move(terms));
}

} // namespace

TEST_CASE("evaluation of basic terms", "[exppoly]") {
    CHECK(ExpPoly::term(1.0, 1.0).evaluate(0.0).real() == Catch::Approx(1.0));
    CHECK(ExpPoly::term(1.0, 1.0, 1).evaluate(1.0).real() == Catch::Approx(std::exp(-1.0)));
}

TEST_CASE("evaluating a printed three-term ruin formula", "[exppoly]") {
    const ExpPoly psi({{Cx(0.00853), Cx(3.90909), 0}, {Cx(0.0456), Cx(3.0744), 0},
                       {Cx(0.9458), Cx(0.0806231), 0}});
    CHECK(psi.evaluate(2.0).real() == Catch::Approx(0.8051).margin(1e-4));
}

TEST_CASE("equal-rate and distinct-rate convolutions", "[exppoly]") {
    const ExpPoly e1 = ExpPoly::term(1.0, 1.0);
    const ExpPoly c11 = e1.convolve(e1); // x e^{-x}
    REQUIRE(c11.terms().size() == 1);
    CHECK(c11.terms()[0].power == 1);
    CHECK(std::abs(c11.terms()[0].coeff - Cx(1.0)) < 1e-14);

    const ExpPoly e2 = ExpPoly::term(1.0, 2.0);
    const ExpPoly c12 = e1.convolve(e2); // (e^{-x} - e^{-2x})/(2-1)
    const double expect = std::exp(-1.0) - std::exp(-2.0);
    CHECK(c12.evaluate(1.0).real() == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("convolution against the quadrature oracle", "[exppoly]") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 4; ++trial) {
        const ExpPoly f = random_exppoly(gen), g = random_exppoly(gen);
        const ExpPoly fg = f.convolve(g);
        for (double u : {0.5, 1.0, 2.7}) {
            const double oracle =
                test::quad([&](double x) { return (f.evaluate(u - x) * g.evaluate(x)).real(); }, 0.0, u);
            CHECK(std::abs(fg.evaluate(u).real() - oracle) < 1e-10 * std::max(1.0, std::abs(oracle)));
        }
    }
}

TEST_CASE("convolution is commutative and bilinear", "[exppoly]") {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 5; ++trial) {
        const ExpPoly f = random_exppoly(gen), g = random_exppoly(gen), h = random_exppoly(gen);
        const ExpPoly fg = f.convolve(g), gf = g.convolve(f);
        const ExpPoly left = f.convolve(g + h.scaled(2.0));
        const ExpPoly right = f.convolve(g) + f.convolve(h).scaled(2.0);
        for (int k = 1; k <= 10; ++k) {
            const double u = 0.4 * k;
            CHECK(std::abs(fg.evaluate(u) - gf.evaluate(u)) <=
                  1e-9 * std::max(1.0, std::abs(fg.evaluate(u))));
            CHECK(std::abs(left.evaluate(u) - right.evaluate(u)) <=
                  1e-9 * std::max(1.0, std::abs(left.evaluate(u))));
        }
    }
}

TEST_CASE("Laplace transform factorizes convolutions", "[exppoly]") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> unif(0.1, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        const ExpPoly f = random_exppoly(gen), g = random_exppoly(gen);
        const Cx s(unif(gen), unif(gen) - 1.0);
        const Cx lhs = f.convolve(g).laplace(s);
        const Cx rhs = f.laplace(s) * g.laplace(s);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("Laplace transform basics and poles", "[exppoly]") {
    CHECK(std::abs(ExpPoly::term(1.0, 2.0).laplace(Cx(1.0)) - Cx(1.0 / 3.0)) < 1e-14);
    CHECK(std::abs(ExpPoly::term(1.0, 1.0, 1).laplace(Cx(0.0)) - Cx(1.0)) < 1e-14); // mean of Exp(1)
    CHECK_THROWS_AS(ExpPoly::term(1.0, 1.0).laplace(Cx(-1.0)), Error);
}

TEST_CASE("Dickson-Hipp operator on exponentials", "[exppoly]") {
    const ExpPoly f = ExpPoly::term(1.0, 3.0); // e^{-3x}
    const ExpPoly tf = f.dickson_hipp(2.0);    // e^{-3x} / 5
    REQUIRE(tf.terms().size() == 1);
    CHECK(std::abs(tf.terms()[0].coeff - Cx(0.2)) < 1e-14);
    CHECK(std::abs(tf.terms()[0].rate - Cx(3.0)) < 1e-14);

    // T_0 f(0) is the total integral
    CHECK(std::abs(ExpPoly::term(1.0, 1.0).dickson_hipp(0.0).evaluate(0.0) - Cx(1.0)) < 1e-14);
    CHECK_THROWS_AS(ExpPoly::term(1.0, 1.0).dickson_hipp(Cx(-2.0)), Error);
}

TEST_CASE("Dickson-Hipp difference-quotient and commutation identities", "[exppoly]") {
    const ExpPoly f = ExpPoly::term(1.0, 1.0);
    const Cx r1(1.0), r2(2.0);
    const ExpPoly chain = f.dickson_hipp(r2).dickson_hipp(r1);
    const ExpPoly chain_swapped = f.dickson_hipp(r1).dickson_hipp(r2);
    const ExpPoly quotient = (f.dickson_hipp(r1) - f.dickson_hipp(r2)).scaled(1.0 / (r2 - r1));
    for (double x : {0.0, 1.0, 2.0}) {
        CHECK(std::abs(chain.evaluate(x) - quotient.evaluate(x)) < 1e-12);
        CHECK(std::abs(chain.evaluate(x) - chain_swapped.evaluate(x)) < 1e-10);
    }
}

TEST_CASE("operator chains evaluate divided differences of the transform", "[exppoly]") {
    // [(T_{r1} T_{r2} T_{r3}) f](0) = (-1)^{3+1} f_hat[r1, r2, r3] for f = e^{-x}
    const ExpPoly f = ExpPoly::term(1.0, 1.0);
    const std::vector<Cx> nodes = {Cx(1.0), Cx(2.0), Cx(3.0)};
    ExpPoly chain = f;
    for (const Cx& r : nodes) chain = chain.dickson_hipp(r);
    std::vector<Cx> vals;
    for (const Cx& r : nodes) vals.push_back(f.laplace(r));
    const Cx dd = DividedDifferenceTable<Cx>(nodes, vals).prefix(2);
    CHECK(std::abs(chain.evaluate(0.0) - dd) < 1e-12);
    CHECK(std::abs(dd - Cx(1.0 / 24.0)) < 1e-12);
}

TEST_CASE("derivatives are termwise analytic", "[exppoly]") {
    const ExpPoly f = ExpPoly::term(1.0, 2.0); // e^{-2x}
    const ExpPoly df = f.derivative();
    REQUIRE(df.terms().size() == 1);
    CHECK(std::abs(df.terms()[0].coeff - Cx(-2.0)) < 1e-14);

    const ExpPoly g = ExpPoly::term(1.0, 1.0, 1); // x e^{-x}
    const ExpPoly dg = g.derivative();            // e^{-x} - x e^{-x}
    CHECK(std::abs(dg.evaluate(0.0) - Cx(1.0)) < 1e-14);

    std::mt19937_64 gen(31);
    const ExpPoly h = random_exppoly(gen);
    const double x = 1.3, step = 1e-5;
    const double fd2 = (h.evaluate(x + step) + h.evaluate(x - step) - 2.0 * h.evaluate(x)).real() /
                       (step * step);
    CHECK(std::abs(h.derivative(2).evaluate(x).real() - fd2) < 1e-5);
}

TEST_CASE("conjugate-closed term sets evaluate to real values", "[exppoly]") {
    const Cx c(0.3, 0.8), r(1.2, 2.0);
    const ExpPoly f({{c, r, 1}, {std::conj(c), std::conj(r), 1}});
    for (double x : {0.0, 0.7, 3.0}) {
        const Cx v = f.evaluate(x);
        CHECK(std::abs(v.imag()) <= 1e-10 * std::abs(v.real()) + 1e-14);
    }
}

TEST_CASE("terms merge by rate and power", "[exppoly]") {
    const ExpPoly f({{Cx(1.0), Cx(2.0), 0}, {Cx(3.0), Cx(2.0 + 1e-12), 0}, {Cx(-4.0), Cx(2.0), 1}});
    REQUIRE(f.terms().size() == 2); // the two power-0 terms merged
    const ExpPoly g = f + f.scaled(-1.0);
    CHECK(g.empty());
}
