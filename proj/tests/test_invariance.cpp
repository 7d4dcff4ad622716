#include <gtest/gtest.h>

#include <cmath>

#include "finsler/error.hpp"
#include "finsler/invariance.hpp"
#include "test_support.hpp"

using namespace finsler;
using finsler::testing::battery;
using finsler::testing::kFields;

namespace {

void expect_consistent(const SymmetryVerdict& v, double tol) {
    EXPECT_EQ(v.witness.has_value(), !v.is_symmetry);
    EXPECT_EQ(v.max_deviation <= tol, v.is_symmetry);
}

LinearMap diag(std::initializer_list<double> d, Field field = Field::Real) {
    const std::vector<double> v(d);
    return LinearMap::diagonal(v, field);
}

}  // namespace

TEST(IsSymmetry, Examples) {
    const auto euc = MetricSpec::euclidean(3, Field::Real);
    const auto u = random_unitary(3, Field::Real, 1);
    const auto ok = is_symmetry(u, euc, 500, 1);
    EXPECT_TRUE(ok.is_symmetry);
    EXPECT_LE(ok.max_deviation, 1e-10);
    expect_consistent(ok, 1e-9);

    const auto bad = is_symmetry(diag({2, 1, 1}), euc, 500, 1);
    EXPECT_FALSE(bad.is_symmetry);
    expect_consistent(bad, 1e-9);
    ASSERT_TRUE(bad.witness.has_value());
    const auto& w = *bad.witness;
    const double expected = relative_deviation(euc.eval(diag({2, 1, 1}).apply(w.g), diag({2, 1, 1}).apply(w.h)),
                                               euc.eval(w.g, w.h));
    EXPECT_NEAR(w.deviation, expected, 1e-15);
    // Along e1 the deviation is exactly |h|.
    const auto e1 = Vector::basis(3, 0, Field::Real);
    EXPECT_DOUBLE_EQ(euc.eval(e1, diag({2, 1, 1}).apply(e1)), 2.0);

    for (const Field field : kFields) {
        const auto nq = MetricSpec::norm_quotient(3, field);
        const auto cu = random_unitary(3, field, 2).scaled(3.0);
        EXPECT_TRUE(is_symmetry(cu, nq, 500, 2).is_symmetry);
    }
}

TEST(IsSymmetry, FieldAndShapeChecks) {
    const auto real = MetricSpec::euclidean(3, Field::Real);
    const auto complex = MetricSpec::euclidean(3, Field::Complex);
    EXPECT_THROW(is_symmetry(random_unitary(3, Field::Complex, 1), real, 10, 1), InvalidArgument);
    EXPECT_TRUE(is_symmetry(random_rotation(3, 4), complex, 100, 1).is_symmetry);
    EXPECT_THROW(is_symmetry(LinearMap::identity(2, Field::Real), real, 10, 1), InvalidArgument);
}

TEST(IsSymmetry, DomainViolationsCount) {
    const auto ring = MetricSpec::from_theta(theta_profile("1"), 2, Field::Real, RadiusDomain({{1, 2}}, false));
    const auto v = is_symmetry(LinearMap::identity(2, Field::Real).scaled(3.0), ring, 50, 1);
    EXPECT_FALSE(v.is_symmetry);
    EXPECT_GT(v.skipped, 0u);
    EXPECT_TRUE(std::isinf(v.max_deviation));
}

TEST(IsSymmetry, SerialAndParallelAgreeExactly) {
    const auto spec = MetricSpec::from_theta(theta_profile(finsler::testing::kTheta3), 4, Field::Complex);
    Rng rng(5);
    const auto t = random_non_congruence(4, Field::Complex, 1.1, rng);
    SymmetryOptions serial;
    serial.exec = Exec::Serial;
    serial.early_exit = false;
    SymmetryOptions par = serial;
    par.exec = Exec::Parallel;
    const auto a = is_symmetry(t, spec, 300, 5, serial);
    const auto b = is_symmetry(t, spec, 300, 5, par);
    EXPECT_EQ(a.max_deviation, b.max_deviation);
    EXPECT_EQ(a.witness->g.data(), b.witness->g.data());
}

TEST(IsSymmetry, SingularMapsNeverPass) {
    for (const Field field : kFields) {
        for (const auto& [name, spec] : battery(3, field)) {
            for (std::uint64_t k = 0; k < 10; ++k) {
                Rng rng(derive_seed(6, k));
                Eigen::MatrixXcd m = random_unitary(3, field, rng).data();
                m.col(static_cast<Eigen::Index>(k % 3)).setZero();
                const auto t = LinearMap::from_eigen(random_unitary(3, field, rng).data() * m, field);
                EXPECT_FALSE(is_symmetry(t, spec, 200, k).is_symmetry) << name;
            }
        }
    }
}

TEST(IsSymmetry, MonoidClosure) {
    const double tol = 1e-9;
    for (const Field field : kFields) {
        for (const auto& [name, spec] : battery(3, field)) {
            const bool scalable = check_homothety_invariance(spec, 2, 100, 1).invariant;
            for (std::uint64_t k = 0; k < 20; ++k) {
                Rng rng(derive_seed(7, k));
                const double c1 = scalable ? 1.7 : 1.0;
                const auto t1 = random_unitary(3, field, rng).scaled(c1);
                const auto t2 = random_unitary(3, field, rng);
                const auto v1 = is_symmetry(t1, spec, 200, k);
                const auto v2 = is_symmetry(t2, spec, 200, k);
                ASSERT_TRUE(v1.is_symmetry && v2.is_symmetry) << name;
                SymmetryOptions loose;
                loose.tol = 3 * tol;
                EXPECT_TRUE(is_symmetry(t1.compose(t2), spec, 200, k, loose).is_symmetry) << name;
            }
        }
    }
}

TEST(ClassifyCongruence, Examples) {
    const auto u = random_unitary(3, Field::Complex, 8);
    EXPECT_EQ(classify_congruence(u).kind, CongruenceClass::Kind::Isometry);
    const auto c = classify_congruence(u.scaled(3.0));
    EXPECT_EQ(c.kind, CongruenceClass::Kind::Congruence);
    EXPECT_NEAR(c.c, 3, 1e-12);
    const auto d = classify_congruence(diag({2, 1}));
    EXPECT_EQ(d.kind, CongruenceClass::Kind::NotCongruence);
    EXPECT_NEAR(d.sv_ratio, 2, 1e-12);
    const auto z = classify_congruence(LinearMap::identity(3, Field::Real).scaled(0.0));
    EXPECT_EQ(z.kind, CongruenceClass::Kind::NotCongruence);
    EXPECT_TRUE(std::isinf(z.sv_ratio));
}

TEST(ClassifyCongruence, Soundness) {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        Rng rng(derive_seed(9, i));
        const Field field = i % 2 ? Field::Complex : Field::Real;
        const std::size_t dim = 2 + i % 4;
        const Scalar c = random_scalar(field, 0.2, 5, rng);
        const auto cls = classify_congruence(random_unitary(dim, field, rng).scaled(c));
        EXPECT_NE(cls.kind, CongruenceClass::Kind::NotCongruence);
        EXPECT_LE(std::abs(cls.c - std::abs(c)), 1e-9);
        const auto t = random_non_congruence(dim, field, 1.01, rng);
        const auto sv = singular_values(t);
        EXPECT_GE(sv.front() / sv.back(), 1.01);
        EXPECT_EQ(classify_congruence(t).kind, CongruenceClass::Kind::NotCongruence);
    }
}

TEST(Probe, Examples) {
    const auto fs = MetricSpec::fubini_study(3, Field::Complex);
    EXPECT_TRUE(is_symmetry(LinearMap::identity(3, Field::Complex).scaled(2.0), fs, 500, 1).is_symmetry);
    const auto theta = MetricSpec::from_theta(theta_profile(finsler::testing::kTheta1), 3, Field::Real);
    const auto rep = theorem_main_probe(theta, 10);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.maps_tested, 100u);
    EXPECT_GT(rep.min_failure_deviation, 1e-3);
    EXPECT_EQ(rep.controls_tested, 100u);
    EXPECT_FALSE(rep.homothety_invariant);
    const auto nq = theorem_main_probe(MetricSpec::norm_quotient(3, Field::Complex), 11);
    EXPECT_TRUE(nq.passed());
    EXPECT_TRUE(nq.homothety_invariant);
}

TEST(Probe, Preconditions) {
    try {
        theorem_main_probe(MetricSpec::euclidean(2, Field::Real), 1);
        FAIL() << "dimension 2 must be rejected";
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("dim >= 3"), std::string::npos);
    }
    const auto zero = MetricSpec::custom("zero", [](const Vector&, const Vector&) { return 0.0; }, 3,
                                         Field::Real);
    const auto rep = theorem_main_probe(zero, 1);
    EXPECT_TRUE(rep.vacuous);
    EXPECT_FALSE(rep.passed());
}

TEST(Probe, DeterministicAcrossExecution) {
    const auto spec = MetricSpec::from_theta(theta_profile(finsler::testing::kTheta2), 3, Field::Complex);
    ProbeOptions serial;
    serial.n_maps = 20;
    serial.exec = Exec::Serial;
    ProbeOptions par = serial;
    par.exec = Exec::Parallel;
    const auto a = theorem_main_probe(spec, 3, serial);
    const auto b = theorem_main_probe(spec, 3, par);
    EXPECT_EQ(a.min_failure_deviation, b.min_failure_deviation);
    EXPECT_EQ(a.worst_control_deviation, b.worst_control_deviation);
    EXPECT_EQ(write_json(to_json(a)), write_json(to_json(b)));
}

TEST(Dim2, Examples) {
    const double shear[] = {1, 1, 0, 1};
    const std::vector<LinearMap> maps = {diag({2, 0.5}), LinearMap::real(2, 2, shear)};
    const auto rep = dim2_exception_check(1, maps, 200, 1);
    EXPECT_TRUE(rep.all_passed);
    EXPECT_EQ(rep.maps_tested, 2u);
    const std::vector<LinearMap> doubled = {diag({2, 2})};
    EXPECT_THROW(dim2_exception_check(1, doubled, 200, 1), NumericError);
    const auto area = MetricSpec::area_dim2(1);
    const auto v = is_symmetry(diag({2, 2}), area, 200, 1);
    EXPECT_FALSE(v.is_symmetry);
    const auto& w = *v.witness;
    EXPECT_NEAR(area.eval(w.g.scaled(2.0), w.h.scaled(2.0)), 4 * area.eval(w.g, w.h), 1e-12);
}

TEST(Dim2, RandomUnimodularMapsInBothFields) {
    Rng rng(12);
    std::vector<LinearMap> maps;
    for (int i = 0; i < 100; ++i) maps.push_back(random_unimodular(rng));
    for (const auto& m : maps) EXPECT_NEAR(m.determinant().real(), 1, 1e-12);
    EXPECT_TRUE(dim2_exception_check(1.5, maps, 200, 2).all_passed);
    EXPECT_TRUE(dim2_exception_check(1.5, maps, 200, 2, 1e-9, Field::Complex).all_passed);
}

TEST(RotationSufficiency, Examples) {
    const auto euc = rotation_sufficiency_check(MetricSpec::euclidean(3, Field::Real), 50, 50, 1);
    EXPECT_TRUE(euc.rotations_pass && euc.orthogonal_pass);
    const auto theta = rotation_sufficiency_check(
        MetricSpec::from_theta(theta_profile(finsler::testing::kTheta1), 4, Field::Real), 50, 50, 2);
    EXPECT_TRUE(theta.rotations_pass && theta.orthogonal_pass);
    const auto first = rotation_sufficiency_check(finsler::testing::first_coordinate_spec(3, Field::Real),
                                                  50, 50, 3);
    EXPECT_FALSE(first.rotations_pass);
    EXPECT_FALSE(first.orthogonal_pass);
    EXPECT_TRUE(first.agree());
}

TEST(ReportJson, Shape) {
    const auto spec = MetricSpec::euclidean(2, Field::Real);
    const auto t = diag({2, 1});
    const auto v = is_symmetry(t, spec, 50, 1);
    const auto j = symmetry_report_json(spec, t, v);
    for (const char* key : {"spec", "map", "verdict", "max_deviation", "witness"}) EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j.at("map").size(), 4u);
    EXPECT_TRUE(j.at("witness").contains("g"));
    const auto ok = is_symmetry(LinearMap::identity(2, Field::Real), spec, 50, 1);
    EXPECT_TRUE(symmetry_report_json(spec, LinearMap::identity(2, Field::Real), ok).at("witness").is_null());
}
