#include <cmath>
#include <random>

#include "doctest.h"
#include "wedgefill/joint_energy.hpp"
#include "wedgefill/phantoms.hpp"

using namespace wedgefill;

namespace {

struct Setup {
    Image u;
    ProjectionGeometry g;
    Sinogram b, v;
    SampleMask mask;
    JointParams p;
};

Setup make_setup(unsigned seed) {
    Setup s{Image(16, 16), uniform_geometry(12, 0.0, 15.0, default_detector_count(16, 16), 1.0),
            Sinogram(), Sinogram(), SampleMask(), JointParams()};
    s.b = Sinogram(s.g);
    s.v = Sinogram(s.g);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double& x : s.u.values.v) x = uni(rng);
    for (double& x : s.b.values.v) x = uni(rng);
    for (double& x : s.v.values.v) x = uni(rng);
    std::vector<int> kept;
    for (int a = 0; a < s.g.angle_count(); ++a)
        if (a % 3 != 0) kept.push_back(a);
    s.mask = make_limited_angle_mask(s.g, kept);
    s.p.sigma = 2.0;
    s.p.beta3 = 10.0;
    return s;
}

double dot(const GradientField& a, const GradientField& b) {
    return wedgefill::dot(a.x, b.x) + wedgefill::dot(a.y, b.y);
}

double norm21(const GradientField& z) {
    double s = 0.0;
    for (size_t i = 0; i < z.x.v.size(); ++i) s += std::hypot(z.x.v[i], z.y.v[i]);
    return s;
}

}  // namespace

TEST_CASE("joint energy of zero fields against zero data is zero") {
    Setup s = make_setup(1);
    Image u0(16, 16);
    Sinogram z(s.g), b0(s.g);
    EnergyTerms e = energy(u0, z, b0, s.mask, s.p);
    CHECK(e.pairing == 0.0);
    CHECK(e.data_u == 0.0);
    CHECK(e.data_v == 0.0);
    CHECK(e.tv_u == 0.0);
    CHECK(e.dtv_v == 0.0);
}

TEST_CASE("total is the sum of the reported terms and every term isolates") {
    Setup s = make_setup(2);
    EnergyTerms e = energy(s.u, s.v, s.b, s.mask, s.p);
    CHECK(e.total() == doctest::Approx(e.pairing + e.data_u + e.data_v + e.tv_u + e.dtv_v));
    CHECK(std::isfinite(e.total()));
    CHECK(e.total() > 0.0);

    JointParams q = s.p;
    q.alpha2 = 0.0;
    q.alpha3 = 0.0;
    q.beta1 = 0.0;
    q.beta2 = 0.0;
    EnergyTerms pair_only = energy(s.u, s.v, s.b, s.mask, q);
    CHECK(pair_only.data_u == 0.0);
    CHECK(pair_only.data_v == 0.0);
    CHECK(pair_only.tv_u == 0.0);
    CHECK(pair_only.dtv_v == 0.0);
    CHECK(pair_only.pairing == doctest::Approx(e.pairing));

    // Doubling a weight doubles exactly its own term.
    JointParams d = s.p;
    d.alpha3 *= 2.0;
    EnergyTerms e2 = energy(s.u, s.v, s.b, s.mask, d);
    CHECK(e2.data_v == doctest::Approx(2.0 * e.data_v));
    CHECK(e2.data_u == doctest::Approx(e.data_u));
}

TEST_CASE("pairing term lives only on the unsampled region") {
    Setup s = make_setup(3);
    // Full mask: no unsampled samples, so the pairing term vanishes.
    SampleMask full = full_mask(s.g);
    EnergyTerms e = energy(s.u, s.v, s.b, full, s.p);
    CHECK(e.pairing == 0.0);
}

TEST_CASE("with the directional and pairing terms off the energy is the tv-regularized data fit") {
    Setup s = make_setup(4);
    JointParams q = s.p;
    q.alpha1 = 0.0;
    q.alpha3 = 0.0;
    q.beta2 = 0.0;
    EnergyTerms e = energy(s.u, s.v, s.b, s.mask, q);
    Sinogram ru = forward_project(s.u, s.g);
    double quad = 0.0;
    for (size_t i = 0; i < ru.values.size(); ++i) {
        const double m = s.mask.flags.v[i];
        const double d = ru.values.v[i] - s.b.values.v[i];
        quad += m * d * d;
    }
    CHECK(e.total() == doctest::Approx(0.5 * q.alpha2 * quad + q.beta1 * tv(s.u.values)).epsilon(1e-12));
}

TEST_CASE("split f + g(J) reassembles the energy and has the advertised structure") {
    Setup s = make_setup(5);
    SplitParts parts = split_fgJ(s.b, s.mask, s.p);
    EnergyTerms e = energy(s.u, s.v, s.b, s.mask, s.p);
    CHECK(parts.f(s.u, s.v) + parts.g(parts.J(s.u, s.v)) == doctest::Approx(e.total()).epsilon(1e-12));
    CHECK(parts.g(parts.J(s.u, s.v)) == doctest::Approx(e.dtv_v).epsilon(1e-12));

    // g is a norm scaled by beta2.
    GradientField z(5, 7), w(5, 7);
    std::mt19937 rng(55);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double& x : z.x.v) x = n(rng);
    for (double& x : z.y.v) x = n(rng);
    for (double& x : w.x.v) x = n(rng);
    for (double& x : w.y.v) x = n(rng);
    GradientField zero(5, 7);
    CHECK(parts.g(zero) == 0.0);
    GradientField z3 = z;
    for (double& x : z3.x.v) x *= -3.0;
    for (double& x : z3.y.v) x *= -3.0;
    CHECK(parts.g(z3) == doctest::Approx(3.0 * parts.g(z)).epsilon(1e-12));
    GradientField zw = z;
    for (size_t i = 0; i < z.x.v.size(); ++i) {
        zw.x.v[i] += w.x.v[i];
        zw.y.v[i] += w.y.v[i];
    }
    CHECK(parts.g(zw) <= parts.g(z) + parts.g(w) + 1e-12);
    CHECK(parts.g(z) == doctest::Approx(s.p.beta2 * norm21(z)).epsilon(1e-12));

    // f is midpoint convex on feasible (nonnegative u) pairs.
    Setup t = make_setup(6);
    Image um(16, 16);
    Sinogram vm(s.g);
    for (size_t i = 0; i < um.values.size(); ++i) um.values.v[i] = 0.5 * (s.u.values.v[i] + t.u.values.v[i]);
    for (size_t i = 0; i < vm.values.size(); ++i) vm.values.v[i] = 0.5 * (s.v.values.v[i] + t.v.values.v[i]);
    CHECK(parts.f(um, vm) <= 0.5 * parts.f(s.u, s.v) + 0.5 * parts.f(t.u, t.v) + 1e-10);

    // Nonnegativity of u is enforced through f.
    Image neg = s.u;
    neg.values(3, 3) = -0.5;
    CHECK(std::isinf(parts.f(neg, s.v)));
}

TEST_CASE("J is linear in v and vanishes at v = 0") {
    Setup s = make_setup(7);
    SplitParts parts = split_fgJ(s.b, s.mask, s.p);
    Sinogram zero(s.g);
    GradientField j0 = parts.J(s.u, zero);
    for (double x : j0.x.v) CHECK(x == 0.0);
    for (double x : j0.y.v) CHECK(x == 0.0);

    Sinogram dv(s.g);
    std::mt19937 rng(77);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double& x : dv.values.v) x = n(rng);
    GradientField lin = linearize_J_in_y(s.u, s.v, dv, s.p);
    Sinogram vpd = s.v;
    for (size_t i = 0; i < vpd.values.size(); ++i) vpd.values.v[i] += dv.values.v[i];
    GradientField jd = parts.J(s.u, vpd);
    GradientField j = parts.J(s.u, s.v);
    for (size_t i = 0; i < j.x.v.size(); ++i) {
        CHECK(jd.x.v[i] - j.x.v[i] == doctest::Approx(lin.x.v[i]).epsilon(1e-10));
        CHECK(jd.y.v[i] - j.y.v[i] == doctest::Approx(lin.y.v[i]).epsilon(1e-10));
    }
}

TEST_CASE("linearization of J in u has a second-order remainder") {
    Setup s = make_setup(8);
    SplitParts parts = split_fgJ(s.b, s.mask, s.p);
    Image du(16, 16);
    std::mt19937 rng(88);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double& x : du.values.v) x = n(rng);

    Image zero_du(16, 16);
    GradientField lin0 = linearize_J_in_x(s.u, s.v, zero_du, s.p);
    for (double x : lin0.x.v) CHECK(x == 0.0);

    GradientField lin = linearize_J_in_x(s.u, s.v, du, s.p);
    GradientField probe(lin.x.rows, lin.x.cols);
    for (double& x : probe.x.v) x = n(rng);
    for (double& x : probe.y.v) x = n(rng);

    GradientField j = parts.J(s.u, s.v);
    auto value_at = [&](double h) {
        Image uh = s.u;
        for (size_t i = 0; i < uh.values.size(); ++i) uh.values.v[i] += h * du.values.v[i];
        return dot(parts.J(uh, s.v), probe) - dot(j, probe);
    };
    const double d = dot(lin, probe);
    const double r1 = value_at(1e-3) - 1e-3 * d;
    const double r2 = value_at(5e-4) - 5e-4 * d;
    const double order = std::log(std::fabs(r1) / std::fabs(r2)) / std::log(2.0);
    CHECK(order >= 1.8);
}

TEST_CASE("frozen-anisotropy operator matches the linearization and its adjoint is exact") {
    Setup s = make_setup(9);
    JxOperator op(s.u, s.v, s.p);
    std::mt19937 rng(99);
    std::normal_distribution<double> n(0.0, 1.0);

    Image du(16, 16);
    for (double& x : du.values.v) x = n(rng);
    GradientField a = op.apply(du.values);
    GradientField lin = linearize_J_in_x(s.u, s.v, du, s.p);
    for (size_t i = 0; i < a.x.v.size(); ++i) {
        CHECK(a.x.v[i] == doctest::Approx(lin.x.v[i]).epsilon(1e-10));
        CHECK(a.y.v[i] == doctest::Approx(lin.y.v[i]).epsilon(1e-10));
    }

    GradientField z(a.x.rows, a.x.cols);
    for (double& x : z.x.v) x = n(rng);
    for (double& x : z.y.v) x = n(rng);
    Array2 back = op.adjoint(z);
    CHECK(dot(a, z) == doctest::Approx(wedgefill::dot(du.values, back)).epsilon(1e-11));

    // Base value is exactly J(u0, v0).
    SplitParts parts = split_fgJ(s.b, s.mask, s.p);
    GradientField j = parts.J(s.u, s.v);
    for (size_t i = 0; i < j.x.v.size(); ++i) CHECK(op.base_value().x.v[i] == doctest::Approx(j.x.v[i]).epsilon(1e-12));
}

TEST_CASE("parameter validation rejects out-of-range weights") {
    JointParams p;
    p.alpha2 = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = JointParams();
    p.rho = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = JointParams();
    p.iters = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = JointParams();
    p.beta2 = 0.0;  // directional term may be switched off entirely
    p.validate();
}
