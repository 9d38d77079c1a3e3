#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bswap/device_config.hpp"
#include "bswap/errors.hpp"
#include "bswap/model.hpp"
#include "bswap/units.hpp"
#include "reference_values.hpp"

using namespace bswap;
using namespace bswap::units;

namespace {

DeviceParams small_device(int d, double j) {
  DeviceParams dev;
  dev.q1 = {ghz(4.8), ghz(-0.25)};
  dev.q2 = {ghz(5.0), ghz(-0.21)};
  dev.J = j;
  dev.space = FockSpace(d);
  return dev;
}

RVector sorted_eigs(const DeviceParams& dev) { return eigh(system_hamiltonian(dev)).values; }

}  // namespace

TEST_CASE("system hamiltonian, uncoupled spectra") {
  SUBCASE("d=2, J=0") {
    const DeviceParams dev = small_device(2, 0.0);
    const RVector e = sorted_eigs(dev);
    CHECK(e(0) == doctest::Approx(0.0));
    CHECK(e(1) == doctest::Approx(dev.q1.omega01));
    CHECK(e(2) == doctest::Approx(dev.q2.omega01));
    CHECK(e(3) == doctest::Approx(dev.q1.omega01 + dev.q2.omega01));
  }
  SUBCASE("d=3, J=0: E(20) = 2 w1 + delta1") {
    const DeviceParams dev = small_device(3, 0.0);
    const CMatrix h = system_hamiltonian(dev).mat();
    const auto k = static_cast<Eigen::Index>(dev.space.index(2, 0));
    CHECK(h(k, k).real() == doctest::Approx(2 * dev.q1.omega01 + dev.q1.delta));
  }
}

TEST_CASE("system hamiltonian is hermitian and continuous in J") {
  for (double j : {0.0, mhz(1.0), mhz(50.0)}) {
    const DeviceParams dev = small_device(4, j);
    CHECK(hermiticity_defect(system_hamiltonian(dev).mat()) < 1e-12 * max_abs(system_hamiltonian(dev).mat()));
  }
  const double dj = khz(1.0);
  const DeviceParams a = small_device(3, mhz(3.0));
  const DeviceParams b = small_device(3, mhz(3.0) + dj);
  const RVector ea = sorted_eigs(a), eb = sorted_eigs(b);
  CHECK((ea - eb).cwiseAbs().maxCoeff() < 10 * dj);
}

TEST_CASE("drive hamiltonian") {
  const DeviceParams dev = small_device(2, mhz(3.0));
  DriveParams drv{0.0, ghz(4.9), 0.0};
  CHECK(max_abs(drive_hamiltonian(dev, drv, 1e-9).mat()) == 0.0);
  drv.amplitude = mhz(10.0);
  drv.phase = 0.5;
  const double t_zero = (std::numbers::pi / 2 - drv.phase) / drv.frequency;
  CHECK(max_abs(drive_hamiltonian(dev, drv, t_zero).mat()) < 1e-9 * drv.amplitude);
  const CMatrix h = drive_hamiltonian(dev, drv, 0.0).mat();
  // <00|H|10> and <00|H|01> agree for lambda = 1
  CHECK(std::abs(h(0, 2) - h(0, 1)) < 1e-12 * drv.amplitude);
}

TEST_CASE("rwa hamiltonian") {
  SUBCASE("resonant frame with no drive has zero splitting on qubit 1") {
    const DeviceParams dev = small_device(2, 0.0);
    const DriveParams drv{0.0, dev.q1.omega01, 0.0};
    const CMatrix h = rwa_hamiltonian(dev, drv).mat();
    CHECK(std::abs(h(0, 0) - h(2, 2)) < 1e-6);
    CHECK(std::abs(h(0, 2)) == 0.0);
  }
  SUBCASE("phi -> phi + pi flips the drive quadrature") {
    const DeviceParams dev = small_device(3, mhz(3.0));
    const DriveParams a{mhz(10.0), ghz(4.9), 0.3};
    const DriveParams b{mhz(10.0), ghz(4.9), 0.3 + std::numbers::pi};
    const CMatrix sys = system_hamiltonian(dev).mat() - a.frequency * total_number(dev.space).mat();
    const CMatrix da = rwa_hamiltonian(dev, a).mat() - sys;
    const CMatrix db = rwa_hamiltonian(dev, b).mat() - sys;
    CHECK(max_abs(da + db) < 1e-6);
  }
  SUBCASE("rejects phases outside [0, 2pi)") {
    const DeviceParams dev = small_device(2, 0.0);
    CHECK_THROWS_AS(rwa_hamiltonian(dev, DriveParams{1.0, 1.0, -0.1}).mat(), DomainError);
  }
}

TEST_CASE("static ZZ") {
  CHECK(static_zz(small_device(3, 0.0)) == 0.0);
  CHECK(std::abs(static_zz(small_device(2, mhz(5.0)))) < 1e-12 * mhz(5.0));
  SUBCASE("quadratic in J in the dispersive regime") {
    const double full = static_zz(small_device(3, mhz(1.0)));
    const double half = static_zz(small_device(3, mhz(0.5)));
    const double ratio = full / half;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
  }
}

TEST_CASE("fit_J on the reference device") {
  const DeviceParams bare = reference_device_uncoupled(3);
  CHECK(fit_J(bare, 0.0) == 0.0);
  const double j = fit_J(bare, khz(90.0));
  CHECK(j == doctest::Approx(oracle::kJ3).epsilon(1e-7));
  CHECK(std::abs(static_zz(bare.with_J(j)) - khz(90.0)) < hz(10.0));
  const double j4 = fit_J(reference_device_uncoupled(4), khz(90.0));
  CHECK(j4 == doctest::Approx(oracle::kJ4).epsilon(1e-7));
  SUBCASE("larger target, larger J") { CHECK(fit_J(bare, khz(180.0)) > j); }
  SUBCASE("unreachable target is a calibration failure") {
    CHECK_THROWS_AS(fit_J(bare, ghz(1.0)), CalibrationError);
    CHECK_THROWS_AS(fit_J(reference_device_uncoupled(2), khz(90.0)), CalibrationError);
  }
}

TEST_CASE("spectrum") {
  SUBCASE("J=0 places |00>->|10> at w1") {
    const DeviceParams dev = small_device(3, 0.0);
    const TransitionTable t = spectrum(dev);
    const Transition* row = t.find("00", "10");
    REQUIRE(row != nullptr);
    CHECK(row->frequency == doctest::Approx(dev.q1.omega01));
  }
  SUBCASE("reference device: two-photon line between the one-photon lines") {
    const DeviceParams dev = reference_device(3);
    const TransitionTable t = spectrum(dev);
    CHECK_FALSE(t.any_ambiguous);
    const Transition* bsw = t.find("00", "11");
    const Transition* l01 = t.find("00", "01");
    const Transition* l10 = t.find("00", "10");
    REQUIRE(bsw);
    REQUIRE(l01);
    REQUIRE(l10);
    CHECK(bsw->photons == 2);
    CHECK(bsw->frequency > std::min(l01->frequency, l10->frequency));
    CHECK(bsw->frequency < std::max(l01->frequency, l10->frequency));
    for (const auto& r : t.rows) CHECK(r.frequency > 0);
  }
  SUBCASE("level repulsion at Delta -> 0") {
    DeviceParams dev = small_device(3, mhz(5.0));
    dev.q2.omega01 = dev.q1.omega01;
    const DressedBasis db = dressed_basis(dev);
    const double split = std::abs(db.energies(static_cast<Eigen::Index>(dev.space.index(1, 0))) -
                                  db.energies(static_cast<Eigen::Index>(dev.space.index(0, 1))));
    CHECK(split >= 2 * dev.J * (1 - 1e-9));
  }
  SUBCASE("labels form a permutation when unambiguous") {
    const DressedBasis db = dressed_basis(reference_device(3));
    CHECK_FALSE(db.any_ambiguous);
    CHECK(unitarity_defect(db.vectors) < 1e-9);
  }
}

TEST_CASE("device config files") {
  const std::string base =
      "q1.freq_GHz = 4.3796\nq1.anharm_GHz = -0.2393\nq2.freq_GHz = 4.61368\nq2.anharm_GHz = -0.24278\n";
  SUBCASE("target ZZ is fitted") {
    const DeviceConfig cfg = parse_device_config(base + "target_zz_kHz = 90 # comment\nlevels = 3\n");
    CHECK(cfg.device.J == doctest::Approx(oracle::kJ3).epsilon(1e-7));
    CHECK(cfg.device.lambda == 1.0);
  }
  SUBCASE("explicit J") {
    const DeviceConfig cfg = parse_device_config(base + "J_GHz = 0.001\n");
    CHECK(cfg.device.J == doctest::Approx(ghz(0.001)));
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(parse_device_config(base + "J_GHz = 0.001\ntarget_zz_kHz = 90\n"), ConfigError);
    CHECK_THROWS_AS(parse_device_config(base), ConfigError);
    CHECK_THROWS_AS(parse_device_config(base + "J_GHz = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_device_config(base + "J_GHz = 0.001\nfoo = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_device_config(base + "J_GHz = 0.001\nlevels = 1\n"), ConfigError);
    CHECK_THROWS_AS(load_device_config("/nonexistent/device.cfg"), ConfigError);
  }
}
