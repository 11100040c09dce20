// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance is pinned here; nothing is deferred to configuration.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gkzlab/gkzlab.hpp"
#include "interval_oracle.hpp"

using namespace gkzlab;

namespace {

struct Runner {
    int failures = 0;
    int index = 0;

    void criterion(const std::string& name, const std::function<bool(std::string&)>& body) {
        ++index;
        std::string detail;
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (ok) {
            std::printf("PASS  criterion %2d  %s\n", index, name.c_str());
        } else {
            ++failures;
            std::printf("FAIL  criterion %2d  %s%s%s\n", index, name.c_str(),
                        detail.empty() ? "" : " -- ", detail.c_str());
        }
    }
};

ToricInput conifold() { return ToricInput::checked(IntMat{{-1, -1, 1, 1}}); }

KernelBasis conifold_kernel_paper() {
    return KernelBasis::checked(IntMat{{-1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}}, conifold());
}

std::vector<CRat> gauss_alpha(const Rat& a, const Rat& b, const Rat& c) {
    return {CRat(c - 1), CRat(-a), CRat(-b)};
}
std::vector<CRat> gauss_gamma(const Rat& a, const Rat& b, const Rat& c) {
    return {CRat(Rat(0)), CRat(c - 1), CRat(-a), CRat(-b)};
}

Rat pochhammer(const Rat& x, long k) {
    Rat r(1);
    for (long i = 0; i < k; ++i) r *= x + Rat(i);
    return r;
}

bool residual_exactly_zero(const ResidualSeries<CRat>& r) {
    for (const auto& [shift, sites] : r.families)
        for (const auto& [site, val] : sites)
            if (!val.is_zero()) return false;
    return true;
}

}  // namespace

int main() {
    Runner run;

    run.criterion("conifold kernel basis spans the displayed lattice (Hermite forms equal)",
                  [](std::string& detail) {
                      auto kb = kernel_basis(conifold());
                      IntMat displayed{{-1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}};
                      bool ok = hermite_normal_form(kb.A) == hermite_normal_form(displayed) &&
                                kb.A == hermite_normal_form(kb.A);
                      if (!ok) detail = "Hermite forms differ";
                      return ok;
                  });

    run.criterion("conifold arrangement: Delta = [-1,1], clipped arrangement = Z within the box",
                  [](std::string& detail) {
                      auto z = Zonotope::from_weights(conifold());
                      auto hs = supporting_hyperplanes(z);
                      if (hs.size() != 2 || hs[0].offset != Rat(-1) || hs[1].offset != Rat(1)) {
                          detail = "zonotope endpoints are not -1, 1";
                          return false;
                      }
                      Box box = Box::make({Rat(-1, 4)}, {Rat(9, 4)});
                      auto arr = skms_arrangement(conifold(), box);
                      std::vector<Rat> expect{Rat(0), Rat(1), Rat(2)};  // Z intersect [-1/4, 9/4]
                      if (arr.active.size() != expect.size()) {
                          detail = "active count mismatch";
                          return false;
                      }
                      for (std::size_t i = 0; i < expect.size(); ++i)
                          if (arr.active[i].offset != expect[i] ||
                              arr.active[i].normal != std::vector<Int>{1}) {
                              detail = "active offsets differ from the integers";
                              return false;
                          }
                      return true;
                  });

    run.criterion("window rank: enumerate_window(nu = 3/10) = {0, 1} exactly",
                  [](std::string& detail) {
                      auto w = enumerate_window({Rat(3, 10)}, Zonotope::from_weights(conifold()));
                      bool ok = w.characters == std::vector<std::vector<Int>>{{Int(0)}, {Int(1)}};
                      if (!ok) detail = "character list differs";
                      return ok;
                  });

    run.criterion("GKZ operators reproduce the four displayed conifold relations",
                  [](std::string& detail) {
                      auto sys = build_gkz<CRat>(conifold(), conifold_kernel_paper(),
                                                 gauss_alpha(Rat(1, 3), Rat(1, 5), Rat(1, 2)), 1);
                      bool ok = sys.homogeneity.size() == 3 && sys.box_ops.size() == 1;
                      ok = ok && sys.homogeneity[0] ==
                                     homogeneity_operator<CRat>({Int(-1), Int(1), Int(0), Int(0)},
                                                                CRat(Rat(-1, 2)));
                      ok = ok && sys.homogeneity[1] ==
                                     homogeneity_operator<CRat>({Int(1), Int(0), Int(1), Int(0)},
                                                                CRat(Rat(-1, 3)));
                      ok = ok && sys.homogeneity[2] ==
                                     homogeneity_operator<CRat>({Int(1), Int(0), Int(0), Int(1)},
                                                                CRat(Rat(-1, 5)));
                      ok = ok && equal_up_to_sign(sys.box_ops[0].second,
                                                  box_operator<CRat>({Int(1), Int(1), Int(-1),
                                                                      Int(-1)}));
                      if (!ok) detail = "operator mismatch";
                      return ok;
                  });

    run.criterion(
        "series residuals: homogeneity exactly 0 at N in {3,5,7}; box interior exactly 0; "
        "Gauss/Pochhammer oracle to 1e-12 at N = 8",
        [](std::string& detail) {
            Rat a(1, 3), b(1, 5), c(1, 2);
            auto sys = build_gkz<CRat>(conifold(), conifold_kernel_paper(), gauss_alpha(a, b, c), 1);
            for (long N : {3L, 5L, 7L}) {
                auto s = series_solution(sys, gauss_gamma(a, b, c), N);
                for (const auto& op : sys.homogeneity)
                    if (!residual_exactly_zero(apply_operator(op, s))) {
                        detail = "homogeneity residual nonzero at N=" + std::to_string(N);
                        return false;
                    }
                auto r = apply_operator(sys.box_ops[0].second, s);
                if (!r.interior_zero || r.interior_max != 0.0) {
                    detail = "box interior residual nonzero at N=" + std::to_string(N);
                    return false;
                }
            }
            auto s8 = series_solution(sys, gauss_gamma(a, b, c), 8);
            for (long k = 0; k <= 8; ++k) {
                Rat expect =
                    pochhammer(a, k) * pochhammer(b, k) / (pochhammer(c, k) * pochhammer(Rat(1), k));
                Cplx got = s8.coeff.at({-k}).to_complex();
                if (std::abs(got - Cplx(to_double(expect))) > 1e-12) {
                    detail = "Pochhammer oracle mismatch at k=" + std::to_string(k);
                    return false;
                }
                if (k >= 1 && !s8.coeff.at({k}).is_zero()) {
                    detail = "positive-side coefficient not exactly zero";
                    return false;
                }
            }
            return true;
        });

    run.criterion(
        "closed form: exact integer matrices at (0,0,0); det product = 1 to 1e-12 on 100 random "
        "triples; g0 ginf = I exactly at zero",
        [](std::string& detail) {
            auto rep = gauss_closed_form({Cplx(0.0), Cplx(0.0), Cplx(0.0)});
            CMat g0{{Cplx(2.0), Cplx(1.0)}, {Cplx(-1.0), Cplx(0.0)}};
            CMat g1 = CMat::identity(2);
            CMat gi{{Cplx(0.0), Cplx(-1.0)}, {Cplx(1.0), Cplx(2.0)}};
            if (!(rep.generator("0") == g0 && rep.generator("1") == g1 &&
                  rep.generator("inf") == gi)) {
                detail = "zero-parameter matrices are not exact";
                return false;
            }
            if (!(rep.generator("0") * rep.generator("inf") == CMat::identity(2))) {
                detail = "g0 ginf != I exactly";
                return false;
            }
            std::mt19937 rng(1009);
            std::uniform_real_distribution<double> u(-0.9, 0.9);
            for (int i = 0; i < 100; ++i) {
                GaussParams p{Cplx(u(rng), u(rng) / 3), Cplx(u(rng), u(rng) / 3),
                              Cplx(u(rng), u(rng) / 3)};
                auto r = gauss_closed_form(p);
                Cplx prod(1.0);
                for (const auto& g : r.generators)
                    prod *= g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
                if (std::abs(prod - Cplx(1.0)) > 1e-12) {
                    detail = "determinant product deviates";
                    return false;
                }
            }
            return true;
        });

    run.criterion(
        "numeric vs closed-form Gauss monodromy at (1/3,1/5,1/2): invariants to 1e-8, ordered "
        "product = I to 1e-8, under 10 s",
        [](std::string& detail) {
            auto t0 = std::chrono::steady_clock::now();
            GaussParams p{Cplx(1.0 / 3), Cplx(1.0 / 5), Cplx(1.0 / 2)};
            auto sys = companion_system(gauss_ode(p.a, p.b, p.c));
            auto numeric = monodromy_rep(sys, Cplx(0.5, -0.5));
            auto closed = gauss_closed_form(p);
            auto cmp = compare_up_to_conjugacy(numeric, closed, 1e-8);
            double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (!cmp.pass) {
                detail = "trace invariants deviate by " + std::to_string(cmp.max_delta);
                return false;
            }
            if (numeric.product_defect() > 1e-8 || closed.product_defect() > 1e-8) {
                detail = "ordered product defect too large";
                return false;
            }
            if (elapsed >= 10.0) {
                detail = "runtime " + std::to_string(elapsed) + " s";
                return false;
            }
            return true;
        });

    run.criterion(
        "elementary monodromy: z y' = alpha y transport = e^{2 pi i k alpha} to 1e-10 for "
        "k in {-2..2}, alpha in {1/4, 1/3, 7/5}",
        [](std::string& detail) {
            for (double alpha : {0.25, 1.0 / 3, 1.4}) {
                auto sys = companion_system(euler_ode(Cplx(alpha)));
                for (int k = -2; k <= 2; ++k) {
                    CMat t = CMat::identity(1);
                    if (k == 0) {
                        // contractible loop away from the singularity
                        auto loop = Loop::polygon({Cplx(1.0), Cplx(1.2, 0.3), Cplx(0.9, 0.4),
                                                   Cplx(1.0)},
                                                  sys.finite_singular);
                        t = continue_along(sys, loop);
                    } else {
                        auto loop = Loop::lasso(Cplx(1.0), Cplx(0.0), 1.0, 48,
                                                sys.finite_singular, k);
                        t = continue_along(sys, loop);
                    }
                    Cplx expect = std::exp(Cplx(0.0, 2.0 * M_PI * k * alpha));
                    if (std::abs(t(0, 0) - expect) > 1e-10) {
                        detail = "transport deviates at alpha=" + std::to_string(alpha) +
                                 ", k=" + std::to_string(k);
                        return false;
                    }
                }
            }
            return true;
        });

    run.criterion(
        "conifold K0 specialization at e^{-2 pi i alpha} equals the closed form to 1e-10 for 20 "
        "random non-resonant triples",
        [](std::string& detail) {
            std::mt19937 rng(20240811);
            std::uniform_int_distribution<int> numer(-20, 20);
            std::uniform_int_distribution<int> denom(3, 11);
            auto kernel = conifold_kernel_paper();
            auto k0 = conifold_k0_rep();
            int done = 0, attempts = 0;
            while (done < 20 && attempts < 1000) {
                ++attempts;
                Rat a(numer(rng), denom(rng)), b(numer(rng), denom(rng)), c(numer(rng), denom(rng));
                std::vector<Rat> alpha{c - 1, -a, -b};
                if (!check_nonresonant(kernel, alpha)) continue;
                GaussParams p{Cplx(to_double(a)), Cplx(to_double(b)), Cplx(to_double(c))};
                std::vector<Cplx> alpha_c{p.c - Cplx(1.0), -p.a, -p.b};
                auto spec = k0.specialize_at(specialization_from_alpha(alpha_c));
                auto closed = gauss_closed_form(p);
                for (const auto* label : {"0", "1", "inf"})
                    if (max_abs(spec.generator(label) - closed.generator(label)) > 1e-10) {
                        detail = "specialization deviates from the closed form";
                        return false;
                    }
                ++done;
            }
            if (done < 20) {
                detail = "could not draw 20 non-resonant triples";
                return false;
            }
            return true;
        });

    run.criterion(
        "perverse validator: identity datum passes on line and square; rank-1 fixture passes iff "
        "a b != 0; 200 single-axiom mutations each yield exactly one violation class",
        [](std::string& detail) {
            auto line = stratify(
                skms_arrangement(conifold(), Box::make({Rat(-1, 4)}, {Rat(5, 4)})));
            auto square_input = ToricInput::checked(IntMat{{1, -1, 0, 0}, {0, 0, 1, -1}});
            auto square = stratify(skms_arrangement(
                square_input, Box::make({Rat(-1), Rat(-1)}, {Rat(1), Rat(1)})));
            if (!validate(line, PerverseDatum::identity(line, 1), 1e-10).pass) {
                detail = "identity datum fails on the line";
                return false;
            }
            if (!validate(square, PerverseDatum::identity(square, 1), 1e-10).pass) {
                detail = "identity datum fails on the square";
                return false;
            }
            for (Cplx a : {Cplx(0.0), Cplx(1.0), Cplx(-2.0, 0.5)})
                for (Cplx b : {Cplx(0.0), Cplx(1.0), Cplx(0.0, 1.0)}) {
                    auto fx = example_datum_rank1(a, b);
                    bool expect = a != Cplx(0.0) && b != Cplx(0.0);
                    if (validate(fx.poset, fx.datum, 1e-10).pass != expect) {
                        detail = "rank-1 fixture pass/fail disagrees with a b != 0";
                        return false;
                    }
                }
            // fuzz: four isolated mutation kinds, 50 rounds each
            std::mt19937 rng(4242);
            std::uniform_real_distribution<double> u(0.2, 1.8);
            std::size_t v = square.size(), e = square.size(), cc = square.size();
            for (std::size_t i = 0; i < square.size() && v == square.size(); ++i)
                if (square.face(i).dim == 0) v = i;
            for (std::size_t i = 0; i < square.size() && e == square.size(); ++i)
                if (square.face(i).dim == 1 && square.leq(v, i)) e = i;
            for (std::size_t i = 0; i < square.size() && cc == square.size(); ++i)
                if (square.face(i).dim == 2 && square.leq(e, i)) cc = i;
            int trials = 0;
            for (int iter = 0; iter < 50; ++iter) {
                Cplx scale(u(rng), 0.1 * u(rng));
                struct Case {
                    std::string expect;
                    ValidationReport rep;
                };
                std::vector<Case> cases;
                {
                    auto d = PerverseDatum::identity(square, 1);
                    d.gamma[{v, cc}] = CMat{{Cplx(1.0) + scale}};
                    cases.push_back({"gamma-functoriality", validate(square, d, 1e-10)});
                }
                {
                    auto d = PerverseDatum::identity(square, 1);
                    d.delta[{cc, v}] = CMat{{Cplx(1.0) + scale}};
                    cases.push_back({"delta-functoriality", validate(square, d, 1e-10)});
                }
                {
                    auto fx = example_datum_rank1(Cplx(u(rng)), Cplx(u(rng)));
                    fx.datum.delta[{fx.plus, fx.zero}] = CMat{{Cplx(1.0) + scale}, {Cplx(0.0)}};
                    cases.push_back({"gamma-delta-identity", validate(fx.poset, fx.datum, 1e-10)});
                }
                {
                    auto fx = example_datum_rank1(Cplx(0.0), Cplx(u(rng)));
                    cases.push_back({"phi-invertibility", validate(fx.poset, fx.datum, 1e-10)});
                }
                for (auto& cse : cases) {
                    ++trials;
                    auto classes = cse.rep.violation_classes();
                    if (cse.rep.pass || classes.size() != 1 || classes[0] != cse.expect) {
                        detail = "mutation did not isolate class " + cse.expect;
                        return false;
                    }
                }
            }
            if (trials != 200) {
                detail = "expected 200 fuzz trials";
                return false;
            }
            return true;
        });

    run.criterion(
        "collinearity agrees with the brute-force interval oracle on every conifold face triple; "
        "no IncompleteDecision in dimension 1",
        [](std::string& detail) {
            auto p = stratify(
                skms_arrangement(conifold(), Box::make({Rat(-1, 4)}, {Rat(5, 4)})));
            for (std::size_t a = 0; a < p.size(); ++a)
                for (std::size_t b = 0; b < p.size(); ++b)
                    for (std::size_t c = 0; c < p.size(); ++c) {
                        auto r = collinear_check(p, a, b, c);
                        if (r.status == CollinearStatus::incomplete) {
                            detail = "IncompleteDecision on a 1d triple";
                            return false;
                        }
                        bool expect = testing::oracle_collinear_1d(p, a, b, c);
                        if ((r.status == CollinearStatus::yes) != expect) {
                            detail = "oracle disagreement on triple " + p.face(a).sign_string() +
                                     " " + p.face(b).sign_string() + " " + p.face(c).sign_string();
                            return false;
                        }
                    }
            return true;
        });

    if (run.failures == 0)
        std::printf("acceptance: all %d criteria passed\n", run.index);
    else
        std::printf("acceptance: %d of %d criteria FAILED\n", run.failures, run.index);
    return run.failures == 0 ? 0 : 1;
}
