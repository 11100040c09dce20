#include <catch2/catch.hpp>

#include <random>

#include "gkzlab/perverse.hpp"

using namespace gkzlab;

namespace {

FacePoset line_poset() {
    auto input = ToricInput::checked(IntMat{{-1, -1, 1, 1}});
    return stratify(skms_arrangement(input, Box::make({Rat(-1, 4)}, {Rat(5, 4)})));
}

FacePoset square_poset() {
    auto input = ToricInput::checked(IntMat{{1, -1, 0, 0}, {0, 0, 1, -1}});
    return stratify(skms_arrangement(input, Box::make({Rat(-1), Rat(-1)}, {Rat(1), Rat(1)})));
}

}  // namespace

TEST_CASE("phi on equal faces is the identity") {
    auto p = line_poset();
    auto d = PerverseDatum::identity(p, 2);
    for (std::size_t f = 0; f < p.size(); ++f)
        REQUIRE(max_abs(phi(d, p, f, f) - CMat::identity(2)) == 0.0);
}

TEST_CASE("phi of the rank-1 fixture") {
    auto fx = example_datum_rank1(Cplx(0.7, 0.1), Cplx(-2.0, 0.0));
    CMat pm = phi(fx.datum, fx.poset, fx.plus, fx.minus);
    CMat mp = phi(fx.datum, fx.poset, fx.minus, fx.plus);
    REQUIRE(pm.rows() == 1);
    REQUIRE(std::abs(pm(0, 0) - Cplx(-2.0, 0.0)) < 1e-15);  // phi_{+,-} = b
    REQUIRE(std::abs(mp(0, 0) - Cplx(0.7, 0.1)) < 1e-15);   // phi_{-,+} = a
}

TEST_CASE("phi reports disagreement between lower bounds") {
    auto fx = example_datum_rank1(Cplx(1.0), Cplx(1.0));
    // break the right-inverse property so phi over {plus, zero} disagrees
    fx.datum.delta[{fx.plus, fx.zero}] = CMat{{Cplx(2.0)}, {Cplx(0.0)}};
    REQUIRE_THROWS_AS(phi(fx.datum, fx.poset, fx.plus, fx.plus), IllDefinedPhi);
}

TEST_CASE("phi without a common face") {
    auto p = line_poset();
    auto d = PerverseDatum::identity(p, 1);
    auto left = *p.index_of("--");
    auto right = *p.index_of("++");
    REQUIRE_THROWS_AS(phi(d, p, left, right), NoCommonFace);
}

TEST_CASE("identity datum validates on the line stratification") {
    auto p = line_poset();
    auto rep = validate(p, PerverseDatum::identity(p, 1), 1e-10);
    REQUIRE(rep.pass);
    REQUIRE(rep.unchecked.empty());
}

TEST_CASE("identity datum validates on the square stratification") {
    auto p = square_poset();
    auto rep = validate(p, PerverseDatum::identity(p, 1), 1e-10);
    REQUIRE(rep.pass);
}

TEST_CASE("rank-1 fixture validates iff a b != 0") {
    auto good = example_datum_rank1(Cplx(-1.0), Cplx(-1.0));
    REQUIRE(validate(good.poset, good.datum, 1e-10).pass);

    auto good2 = example_datum_rank1(Cplx(1.0), Cplx(1.0));
    auto rep2 = validate(good2.poset, good2.datum, 1e-10);
    REQUIRE(rep2.pass);
    // phi_{+,-} phi_{-,+} = ab = 1 here
    CMat round = phi(good2.datum, good2.poset, good2.plus, good2.minus) *
                 phi(good2.datum, good2.poset, good2.minus, good2.plus);
    REQUIRE(std::abs(round(0, 0) - Cplx(1.0)) < 1e-15);

    auto bad = example_datum_rank1(Cplx(0.0), Cplx(1.0));
    auto rep = validate(bad.poset, bad.datum, 1e-10);
    REQUIRE_FALSE(rep.pass);
    REQUIRE(rep.violation_classes() == std::vector<std::string>{"phi-invertibility"});
    bool names_pair = false;
    for (const auto& v : rep.violations)
        names_pair = names_pair || (v.faces == std::vector<std::size_t>{bad.minus, bad.plus} ||
                                    v.faces == std::vector<std::size_t>{bad.plus, bad.minus});
    REQUIRE(names_pair);
}

TEST_CASE("shape mismatches are rejected") {
    auto p = line_poset();
    auto d = PerverseDatum::identity(p, 1);
    d.dims.pop_back();
    REQUIRE_THROWS_AS(validate(p, d, 1e-10), ShapeMismatch);

    auto d2 = PerverseDatum::identity(p, 1);
    d2.gamma.erase(d2.gamma.begin());
    REQUIRE_THROWS_AS(validate(p, d2, 1e-10), ShapeMismatch);
}

TEST_CASE("single-axiom mutations produce exactly one violation class") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> u(0.2, 1.8);

    auto sq = square_poset();
    // a strict chain vertex < edge < cell
    std::size_t v = sq.size(), e = sq.size(), c = sq.size();
    for (std::size_t i = 0; i < sq.size() && v == sq.size(); ++i)
        if (sq.face(i).dim == 0) v = i;
    for (std::size_t i = 0; i < sq.size() && e == sq.size(); ++i)
        if (sq.face(i).dim == 1 && sq.leq(v, i)) e = i;
    for (std::size_t i = 0; i < sq.size() && c == sq.size(); ++i)
        if (sq.face(i).dim == 2 && sq.leq(e, i)) c = i;
    REQUIRE(c < sq.size());

    int trials = 0;
    for (int iter = 0; iter < 50; ++iter) {
        Cplx scale(u(rng), 0.1 * u(rng));

        // gamma functoriality on the square
        {
            auto d = PerverseDatum::identity(sq, 1);
            d.gamma[{v, c}] = CMat{{Cplx(1.0) + scale}};
            auto rep = validate(sq, d, 1e-10);
            REQUIRE_FALSE(rep.pass);
            REQUIRE(rep.violation_classes() == std::vector<std::string>{"gamma-functoriality"});
            ++trials;
        }
        // delta functoriality on the square
        {
            auto d = PerverseDatum::identity(sq, 1);
            d.delta[{c, v}] = CMat{{Cplx(1.0) + scale}};
            auto rep = validate(sq, d, 1e-10);
            REQUIRE_FALSE(rep.pass);
            REQUIRE(rep.violation_classes() == std::vector<std::string>{"delta-functoriality"});
            ++trials;
        }
        // gamma delta = id on the line
        {
            auto fx = example_datum_rank1(Cplx(u(rng)), Cplx(u(rng)));
            fx.datum.delta[{fx.plus, fx.zero}] = CMat{{Cplx(1.0) + scale}, {Cplx(0.0)}};
            auto rep = validate(fx.poset, fx.datum, 1e-10);
            REQUIRE_FALSE(rep.pass);
            REQUIRE(rep.violation_classes() == std::vector<std::string>{"gamma-delta-identity"});
            ++trials;
        }
        // phi invertibility on the line
        {
            auto fx = example_datum_rank1(Cplx(0.0), Cplx(u(rng)));
            auto rep = validate(fx.poset, fx.datum, 1e-10);
            REQUIRE_FALSE(rep.pass);
            REQUIRE(rep.violation_classes() == std::vector<std::string>{"phi-invertibility"});
            ++trials;
        }
    }
    REQUIRE(trials == 200);
}

TEST_CASE("derived consistency: composition through equal faces is automatic") {
    // for triples (C, C, C') the composition axiom reduces to functoriality
    // and gamma delta = id; a valid datum must therefore pass it
    auto fx = example_datum_rank1(Cplx(0.3, 0.4), Cplx(-1.2, 0.1));
    auto rep = validate(fx.poset, fx.datum, 1e-10);
    REQUIRE(rep.pass);
    auto r = collinear_check(fx.poset, fx.minus, fx.minus, fx.zero);
    REQUIRE(r.status == CollinearStatus::yes);
    CMat lhs = phi(fx.datum, fx.poset, fx.minus, fx.zero);
    CMat rhs = phi(fx.datum, fx.poset, fx.minus, fx.zero) *
               phi(fx.datum, fx.poset, fx.minus, fx.minus);
    REQUIRE(max_abs(lhs - rhs) < 1e-12);
}

TEST_CASE("smallest singular value helper") {
    CMat m{{Cplx(3.0), Cplx(0.0)}, {Cplx(0.0), Cplx(0.5)}};
    REQUIRE(detail::smallest_singular_value(m) == Approx(0.5).epsilon(1e-10));
    CMat sing{{Cplx(1.0), Cplx(1.0)}, {Cplx(1.0), Cplx(1.0)}};
    REQUIRE(detail::smallest_singular_value(sing) < 1e-12);
    CMat rot{{Cplx(0.0, 1.0), Cplx(0.0)}, {Cplx(0.0), Cplx(0.0, -2.0)}};
    REQUIRE(detail::smallest_singular_value(rot) == Approx(1.0).epsilon(1e-10));
}
