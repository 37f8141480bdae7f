#include <random>

#include "clmsim/errors.hpp"
#include "clmsim/motorac.hpp"
#include "doctest.h"
#include "test_params.hpp"

using namespace clmsim;

namespace {
constexpr double kOmegaS = 2.0 * kPi * 60.0;

AcMotorComponent make_initialized(AcMotorParams p = clmtest::motor_d(), double v0 = 1.0,
                                  double p_sys = 0.8) {
    AcMotorComponent c("ac", 1, p, kOmegaS);
    c.init(Phasor{v0, 0.0}, p_sys);
    return c;
}

/// Drive the component's filtered voltage close to v by holding the terminal.
void hold_voltage(AcMotorComponent& c, double v, double seconds, double dt = 0.005) {
    const long n = std::lround(seconds / dt);
    for (long i = 0; i < n; ++i) (void)c.post_process(Phasor{v, 0.0}, dt);
}

}  // namespace

TEST_CASE("stalled section is the stall impedance, evaluated directly") {
    const AcMotorParams p = clmtest::motor_d();
    const auto [pr, qr] = motorac::performance_pq(0.5, AcSection::Stalled, p);
    const double den = 0.124 * 0.124 + 0.114 * 0.114;
    CHECK(pr == doctest::Approx(0.25 * 0.124 / den).epsilon(1e-14));
    CHECK(qr == doctest::Approx(0.25 * 0.114 / den).epsilon(1e-14));
    const auto [p0, q0] = motorac::performance_pq(0.0, AcSection::Stalled, p);
    CHECK(p0 == 0.0);
    CHECK(q0 == 0.0);
}

TEST_CASE("init anchors the running curve at the assigned point and power factor") {
    AcMotorComponent c = make_initialized();
    const auto [pr, qr] = motorac::performance_pq(1.0, AcSection::RunningAbove, c.params());
    CHECK(pr == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(qr / pr == doctest::Approx(std::tan(std::acos(0.97))).epsilon(1e-12));
}

TEST_CASE("frequency sensitivity scales P and Q linearly") {
    AcMotorComponent c = make_initialized();
    const auto [p0, q0] = motorac::performance_pq(1.0, AcSection::RunningAbove, c.params(), 0.0);
    const auto [p1, q1] = motorac::performance_pq(1.0, AcSection::RunningAbove, c.params(), 0.01);
    CHECK(p1 == doctest::Approx(p0 * 1.01).epsilon(1e-12));
    CHECK(q1 == doctest::Approx(q0 * (1.0 - 0.033)).epsilon(1e-12));
}

TEST_CASE("vstallbrk lies strictly inside (Vstall, Vbrk) with a sub-1e-4 bracket") {
    AcMotorParams p = clmtest::motor_d();
    p.curve.p0 = 0.8;
    const double v = motorac::compute_vstallbrk(p);
    CHECK(v > p.vstall);
    CHECK(v < p.curve.vbrk);
    // independent oracle: fine scan for the sign change of the curve gap
    const auto gap = [&p](double vv) {
        return motorac::performance_pq(vv, AcSection::RunningBelow, p).first -
               motorac::performance_pq(vv, AcSection::Stalled, p).first;
    };
    double root = p.vstall;
    for (double vv = p.vstall; vv < p.curve.vbrk; vv += 1e-6) {
        if (gap(vv) > 0.0 && gap(vv + 1e-6) <= 0.0) {
            root = vv;
            break;
        }
    }
    CHECK(std::abs(v - root) < 1e-4);
}

TEST_CASE("randomized valid parameter sets keep the bracket under 1e-4") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int accepted = 0;
    while (accepted < 100) {
        AcMotorParams p = clmtest::motor_d();
        p.rstall = 0.05 + 0.15 * u(rng);
        p.xstall = 0.05 + 0.15 * u(rng);
        p.vstall = 0.4 + 0.25 * u(rng);
        p.curve.vbrk = p.vstall + 0.15 + 0.2 * u(rng);
        p.curve.p0 = 0.6 + 0.4 * u(rng);
        p.curve.kp2 = 8.0 + 12.0 * u(rng);
        p.curve.np2 = 1.2 + 1.3 * u(rng);
        // validity = the curves actually cross on the bracket
        const auto gap = [&p](double vv) {
            return motorac::performance_pq(vv, AcSection::RunningBelow, p).first -
                   motorac::performance_pq(vv, AcSection::Stalled, p).first;
        };
        if (gap(p.vstall) <= 0.0 || gap(p.curve.vbrk) >= 0.0) continue;
        ++accepted;
        const double v = motorac::compute_vstallbrk(p);
        CHECK(v >= p.vstall);
        CHECK(v <= p.curve.vbrk);
        // the crossing sits within one bracket width of the returned midpoint
        CHECK(gap(v - 1e-4) > 0.0);
        CHECK(gap(v + 1e-4) < 0.0);
    }
}

TEST_CASE("curves touching exactly at Vstall return Vstall") {
    AcMotorParams p = clmtest::motor_d();
    const double stall_p = motorac::performance_pq(p.vstall, AcSection::Stalled, p).first;
    p.curve.kp2 = (stall_p - p.curve.p0) / std::pow(p.curve.vbrk - p.vstall, p.curve.np2);
    const double v = motorac::compute_vstallbrk(p);
    CHECK(v == doctest::Approx(p.vstall).epsilon(1e-12));
}

TEST_CASE("curves that never cross raise a parameter-inconsistency error") {
    AcMotorParams p = clmtest::motor_d();
    p.curve.p0 = 0.1;
    p.curve.kp2 = 0.1;
    CHECK_THROWS_AS((void)motorac::compute_vstallbrk(p), InitError);
}

TEST_CASE("performance is continuous at Vbrk and near-continuous at Vstallbrk") {
    AcMotorComponent c = make_initialized();
    const AcMotorParams& p = c.params();
    const double above = motorac::performance_pq(p.curve.vbrk, AcSection::RunningAbove, p).first;
    const double below = motorac::performance_pq(p.curve.vbrk, AcSection::RunningBelow, p).first;
    CHECK(above == doctest::Approx(below).epsilon(1e-14));

    const double vsb = c.motor_state().vstallbrk;
    const auto gap = [&p](double v) {
        return motorac::performance_pq(v, AcSection::RunningBelow, p).first -
               motorac::performance_pq(v, AcSection::Stalled, p).first;
    };
    const double slope = std::abs(gap(vsb + 1e-3) - gap(vsb - 1e-3)) / 2e-3;
    CHECK(std::abs(gap(vsb)) <= slope * 1e-4 + 1e-12);
}

TEST_CASE("stall latches after Tstall below Vstall and never releases with Frst 0") {
    AcMotorComponent c = make_initialized();
    const double dt = 0.001;
    // 32 ms below the stall voltage: not yet
    for (int i = 0; i < 32; ++i) (void)c.post_process(Phasor{0.5, 0.0}, dt);
    CHECK(c.motor_state().part_a.status == AcStatus::Running);
    (void)c.post_process(Phasor{0.5, 0.0}, dt);
    CHECK(c.motor_state().part_a.status == AcStatus::Stalled);
    CHECK(c.motor_state().part_b.status == AcStatus::Stalled);
    hold_voltage(c, 1.0, 30.0);
    CHECK(c.motor_state().part_a.status == AcStatus::Stalled);
    CHECK(c.motor_state().part_b.status == AcStatus::Stalled);
}

TEST_CASE("a dip shorter than Tstall resets the stall timer") {
    AcMotorComponent c = make_initialized();
    for (int i = 0; i < 30; ++i) (void)c.post_process(Phasor{0.5, 0.0}, 0.001);
    (void)c.post_process(Phasor{0.95, 0.0}, 0.001);
    CHECK(c.motor_state().part_a.stall_timer == 0.0);
    for (int i = 0; i < 30; ++i) (void)c.post_process(Phasor{0.5, 0.0}, 0.001);
    CHECK(c.motor_state().part_a.status == AcStatus::Running);
}

TEST_CASE("part B restarts after Trst above Vrst, part A never does") {
    AcMotorParams p = clmtest::motor_d();
    p.frst = 0.4;
    p.trst = 0.2;
    AcMotorComponent c = make_initialized(p);
    hold_voltage(c, 0.5, 0.05, 0.001);
    REQUIRE(c.motor_state().part_b.status == AcStatus::Stalled);
    hold_voltage(c, 1.0, 1.0, 0.001);
    CHECK(c.motor_state().part_b.status == AcStatus::Running);
    CHECK(c.motor_state().part_a.status == AcStatus::Stalled);
}

TEST_CASE("contactor opens linearly and recloses along the on-ramp") {
    AcMotorComponent c = make_initialized();
    hold_voltage(c, 0.40, 2.0);  // vf settles at 0.40
    CHECK(c.motor_state().kcon == doctest::Approx(0.5).epsilon(1e-6));
    hold_voltage(c, 0.45, 2.0);  // on-ramp midpoint: half of the opened half recloses
    CHECK(c.motor_state().kcon == doctest::Approx(0.75).epsilon(1e-6));
    hold_voltage(c, 0.55, 2.0);
    CHECK(c.motor_state().kcon == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("voltage filter steps by the exact first-order factor") {
    AcMotorComponent c = make_initialized();
    const double dt = 0.005;
    const double before = c.motor_state().vf;
    (void)c.post_process(Phasor{0.5, 0.0}, dt);
    const double expected = before + (0.5 - before) * (1.0 - std::exp(-dt / 0.05));
    CHECK(c.motor_state().vf == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("stalled thermal response follows the analytic exponential") {
    AcMotorComponent c = make_initialized();
    hold_voltage(c, 0.5, 0.04, 0.001);  // latch the stall
    REQUIRE(c.motor_state().part_a.status == AcStatus::Stalled);
    const AcMotorParams& p = c.params();
    const double input = 1.0 * p.stall_g();
    const double theta0 = c.motor_state().part_a.temperature;
    const double horizon = 20.0;
    hold_voltage(c, 1.0, horizon, 0.005);
    const double expected = input + (theta0 - input) * std::exp(-horizon / p.tth);
    CHECK(c.motor_state().part_a.temperature == doctest::Approx(expected).epsilon(1e-9));
    // and the trip ramp engaged once past Th1t
    CHECK(c.motor_state().part_a.temperature > p.th1t);
    CHECK(c.motor_state().part_a.fth < 1.0);
    CHECK(c.motor_state().part_a.fth ==
          doctest::Approx((p.th2t - c.motor_state().part_a.temperature) / (p.th2t - p.th1t))
              .epsilon(1e-9));
}

TEST_CASE("all-stalled interface is the pure stall admittance") {
    AcMotorComponent c = make_initialized(clmtest::motor_d(), 1.0, 0.8);
    hold_voltage(c, 0.5, 0.04, 0.001);
    hold_voltage(c, 1.0, 0.5);  // restore vf, contactor untouched (0.5 > Vc1off)
    const Phasor y = c.norton_admittance();
    const Phasor expected = c.base_conv() * (1.0 / Phasor{0.124, 0.114});
    CHECK(std::abs(y - expected) < 1e-9);
    CHECK(c.norton_injection(Phasor{1.0, 0.0}) == Phasor{0.0, 0.0});
}

TEST_CASE("open contactors disconnect the motor entirely") {
    AcMotorComponent c = make_initialized();
    hold_voltage(c, 0.2, 2.0);  // below Vc2off: fully open (and stalled)
    CHECK(c.motor_state().kcon == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::abs(c.norton_admittance()) < 1e-9);
    CHECK(std::abs(c.norton_injection(Phasor{0.2, 0.0})) < 1e-9);
}

TEST_CASE("running interface reproduces the assigned power at the initial point") {
    AcMotorComponent c = make_initialized(clmtest::motor_d(), 1.0, 0.37);
    const Phasor v{1.0, 0.0};
    const Phasor i_drawn = c.norton_admittance() * v - c.norton_injection(v);
    const Phasor s = v * std::conj(i_drawn);
    CHECK(s.real() == doctest::Approx(0.37).epsilon(1e-10));
    CHECK(s.imag() == doctest::Approx(q_from_pf(0.37, 0.97)).epsilon(1e-10));
}

TEST_CASE("running-above injection continues as the boundary impedance below Vbrk") {
    AcMotorComponent c = make_initialized();  // regime: running above, anchored at V0 = 1
    const double vbrk = c.params().curve.vbrk;
    const auto [pb, qb] = motorac::performance_pq(vbrk, AcSection::RunningAbove, c.params());
    const Phasor y_brk = Phasor{pb, -qb} / (vbrk * vbrk);
    const Phasor v{0.5, 0.1};
    const Phasor expected = -y_brk * v * c.base_conv();
    CHECK(std::abs(c.norton_injection(v) - expected) < 1e-12);
    // continuous at the seam: both branches agree at |v| = Vbrk
    const Phasor at_seam = c.norton_injection(polar_pu(vbrk, -0.2));
    const Phasor via_curve = -load_current(Phasor{pb, qb} * c.base_conv(), polar_pu(vbrk, -0.2));
    CHECK(std::abs(at_seam - via_curve) < 1e-12);
}

TEST_CASE("below-breakdown operation freezes the previous step's impedance") {
    AcMotorComponent c = make_initialized();
    (void)c.post_process(Phasor{0.8, 0.0}, 0.005);  // running below Vbrk now
    const Phasor y_frozen = c.norton_admittance();
    const auto [pr, qr] = motorac::performance_pq(0.8, AcSection::RunningBelow, c.params(),
                                                  c.motor_state().vf * 0.0);
    const Phasor expected = c.base_conv() * Phasor{pr, -qr} / (0.8 * 0.8);
    CHECK(std::abs(y_frozen - expected) < 1e-9);
    // the admittance presented during the next step does not track the iterate voltage
    CHECK(c.norton_admittance() == y_frozen);
    CHECK(c.norton_injection(Phasor{0.75, 0.0}) == Phasor{0.0, 0.0});
}

TEST_CASE("init below breakdown anchors on the below-breakdown curve") {
    AcMotorComponent c("ac", 1, clmtest::motor_d(), 2.0 * kPi * 60.0);
    c.init(Phasor{0.84, 0.0}, 0.8);
    const auto [pr, qr] = motorac::performance_pq(0.84, AcSection::RunningBelow, c.params());
    CHECK(pr == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(qr == doctest::Approx(q_from_pf(0.8, 0.97)).epsilon(1e-12));
    // and the frozen impedance regime reproduces that point on the network side
    const Phasor v{0.84, 0.0};
    const Phasor s = v * std::conj(c.norton_admittance() * v - c.norton_injection(v));
    CHECK(s.real() == doctest::Approx(0.8).epsilon(1e-10));
}

TEST_CASE("init fails below the stall-breakdown intersection") {
    AcMotorComponent c("ac", 1, clmtest::motor_d(), 2.0 * kPi * 60.0);
    CHECK_THROWS_AS(c.init(Phasor{0.55, 0.0}, 0.8), InitError);
}
