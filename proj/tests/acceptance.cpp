// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Everything goes through the public C API.
#include <tr2l/tr2l.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;
using cplx = std::complex<double>;

int failures = 0;

void report(int id, const char *title, bool ok, const std::string &detail) {
  std::printf("[%s] criterion %2d  %-34s %s\n", ok ? "PASS" : "FAIL", id, title,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char *f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

bool ok(tr2l_status s) {
  if (s != TR2L_OK) std::printf("  C API error: %s\n", tr2l_last_error());
  return s == TR2L_OK;
}

tr2l_ae_params defaults() {
  tr2l_ae_params p;
  tr2l_ae_params_default(&p);
  return p;
}

double p21(const tr2l_matrix2 &u) { return u.re[2] * u.re[2] + u.im[2] * u.im[2]; }

struct Evolution {
  tr2l_propagator u{};
  double window_end = 0;
  double seconds = 0;
  bool ok = false;
};

Evolution evolve(double a, size_t steps) {
  tr2l_ae_params p = defaults();
  Evolution e;
  const auto start = Clock::now();
  tr2l_drive *d = nullptr;
  if (!ok(tr2l_drive_create_rescaled(&p, a, 0, 0, &d))) return e;
  double t0 = 0;
  e.ok = ok(tr2l_drive_window(d, &t0, &e.window_end)) && ok(tr2l_evolve(d, steps, &e.u));
  tr2l_drive_destroy(d);
  e.seconds = seconds_since(start);
  return e;
}

double distance(const tr2l_matrix2 &a, const tr2l_matrix2 &b) {
  double d = INFINITY;
  ok(tr2l_propagator_distance(&a, &b, &d, nullptr));
  return d;
}

void criterion1() {
  Evolution e = evolve(1.0, 20000);
  const double p = p21(e.u.u);
  report(1, "reference inversion", e.ok && p > 0.999 && e.seconds < 1.0,
         fmt("P2=%.6f (>0.999) runtime=%.3fs (<1s)", p, e.seconds));
}

void criterion2() {
  bool pass = true;
  std::string detail;
  for (double a : {2.0, 10.0}) {
    const auto start = Clock::now();
    tr2l_ae_params p = defaults();
    tr2l_drive *d = nullptr;
    tr2l_trajectory *t = nullptr;
    bool good = ok(tr2l_drive_create_rescaled(&p, a, 0, 0, &d)) &&
                ok(tr2l_trajectory_create(d, 20000, nullptr, &t));
    std::vector<double> p2;
    double end = -1;
    for (size_t i = 0; good && i < tr2l_trajectory_size(t); ++i) {
      tr2l_trajectory_point pt;
      good = ok(tr2l_trajectory_point_at(t, i, &pt));
      p2.push_back(pt.p2);
      end = pt.time;
    }
    tr2l_trajectory_destroy(t);
    tr2l_drive_destroy(d);
    const double secs = seconds_since(start);
    // Sigmoidal: flat start, crossing through 1/2 mid-window, flat end.
    bool sigmoid = good && p2.size() == 20001;
    if (sigmoid) {
      sigmoid = p2[2500] < 0.05 && std::abs(p2[10000] - 0.5) < 0.2 &&
                p2[17500] > 0.95;
      size_t crossings = 0;
      for (size_t i = 1; i < p2.size(); ++i)
        crossings += (p2[i - 1] < 0.5) != (p2[i] < 0.5);
      sigmoid = sigmoid && crossings == 1;
    }
    const double final_p2 = p2.empty() ? 0 : p2.back();
    const bool this_ok = good && final_p2 > 0.999 && end == 8.0 / a && sigmoid && secs < 1.0;
    pass = pass && this_ok;
    detail += fmt("a=%g: P2=%.6f T=%g runtime=%.3fs; ", a, final_p2, end, secs);
  }
  report(2, "rescaled inversion", pass, detail + "sigmoidal trajectory");
}

void criterion3() {
  Evolution ref = evolve(1.0, 20000);
  bool pass = ref.ok;
  std::string detail;
  for (double a : {2.0, 5.0, 10.0}) {
    Evolution tr = evolve(a, 20000);
    const double d = distance(ref.u.u, tr.u.u);
    pass = pass && tr.ok && d <= 1e-6;
    detail += fmt("d(a=%g)=%.2e ", a, d);
  }
  // Grid doubling on both windows.
  std::vector<double> ds;
  for (size_t n : {1000, 2000, 4000}) {
    ds.push_back(distance(evolve(1.0, n).u.u, evolve(5.0, n).u.u));
  }
  const double r1 = ds[0] / ds[1], r2 = ds[1] / ds[2];
  pass = pass && r1 >= 3.5 && r1 <= 4.5 && r2 >= 3.5 && r2 <= 4.5;
  report(3, "time-rescaling theorem", pass,
         detail + fmt("(<=1e-6); doubling ratios %.3f %.3f (in [3.5,4.5])", r1, r2));
}

void criterion4() {
  tr2l_ae_params p = defaults();
  bool pass = true;
  std::string detail;
  for (double a : {2.0, 5.0, 10.0}) {
    tr2l_protocol_check c;
    if (!ok(tr2l_check_protocol(&p, a, nullptr, &c))) {
      pass = false;
      continue;
    }
    // Dense scan confirms the maximum sits at t_f/(2a).
    tr2l_drive *d = nullptr;
    double max_rabi = 0, arg = 0;
    if (ok(tr2l_drive_create_rescaled(&p, a, 0, 0, &d))) {
      for (int k = 0; k <= 100000; ++k) {
        const double tau = 8.0 / a * k / 100000.0;
        tr2l_drive_sample s;
        if (ok(tr2l_drive_sample_at(d, tau, &s)) && s.rabi > max_rabi) {
          max_rabi = s.rabi;
          arg = tau;
        }
      }
      tr2l_drive_destroy(d);
    }
    const double expected = (2 * a - 1) * p.omega0;
    pass = pass && std::abs(c.peak_rabi - expected) <= 1e-9 &&
           c.peak_time == 4.0 / a && std::abs(max_rabi - expected) <= 1e-9 &&
           std::abs(arg - 4.0 / a) <= 1e-12;
    detail += fmt("a=%g: peak %.12g at tau=%g; ", a, c.peak_rabi, c.peak_time);
  }
  report(4, "peak law (2a-1) Omega0", pass, detail);
}

struct Curves {
  std::vector<double> values;
  std::vector<std::vector<double>> f; // per a
  bool ok = false;
};

Curves sweep(tr2l_error_kind kind) {
  tr2l_ae_params p = defaults();
  Curves c;
  for (int k = 0; k <= 40; ++k) c.values.push_back(-0.2 + 0.4 * k / 40.0);
  c.values[20] = 0.0;
  const double as[] = {1.0, 2.0, 10.0};
  tr2l_sweep *s = nullptr;
  if (!ok(tr2l_sweep_run(&p, kind, c.values.data(), c.values.size(), as, 3, nullptr, &s)))
    return c;
  c.ok = tr2l_sweep_failure_count(s) == 0 && tr2l_sweep_size(s) == 123;
  c.f.assign(3, {});
  for (size_t i = 0; c.ok && i < tr2l_sweep_size(s); ++i) {
    tr2l_sweep_row row;
    c.ok = ok(tr2l_sweep_row_at(s, i, &row)) && row.ok;
    c.f[i / 41].push_back(row.fidelity);
  }
  tr2l_sweep_destroy(s);
  return c;
}

double max_spread(const Curves &c) {
  double spread = 0;
  for (size_t i = 0; i < c.values.size(); ++i) {
    const double lo = std::min({c.f[0][i], c.f[1][i], c.f[2][i]});
    const double hi = std::max({c.f[0][i], c.f[1][i], c.f[2][i]});
    spread = std::max(spread, hi - lo);
  }
  return spread;
}

void criteria5to7() {
  Curves rabi = sweep(TR2L_ERROR_RABI);
  Curves det = sweep(TR2L_ERROR_DETUNING);

  double lo_neg = 1, lo_pos = 1;
  for (const auto &curve : rabi.f) {
    lo_neg = std::min(lo_neg, curve.front());
    lo_pos = std::min(lo_pos, curve.back());
  }
  const double spread = rabi.ok ? max_spread(rabi) : INFINITY;
  report(5, "robustness to Rabi errors",
         rabi.ok && lo_neg >= 0.913 && lo_pos >= 0.947 && spread <= 0.001,
         fmt("min F(-0.2)=%.6f (>=0.913) min F(+0.2)=%.6f (>=0.947) a-spread=%.1e "
             "(<=0.001)",
             lo_neg, lo_pos, spread));

  double lo = 1;
  for (const auto &curve : det.f)
    for (double f : curve) lo = std::min(lo, f);
  report(6, "robustness to detuning errors", det.ok && lo >= 0.986,
         fmt("min F over |delta|<=0.2, a in {1,2,10} = %.6f (>=0.986)", lo));

  double curve_err = 0;
  bool dominates = rabi.ok;
  for (size_t i = 0; rabi.ok && i < rabi.values.size(); ++i) {
    const double eps = rabi.values[i];
    const double s = std::sin((1 + eps) * M_PI / 2);
    curve_err = std::max(curve_err, std::abs(tr2l_pi_pulse_fidelity(eps) - s * s));
    if (eps > 0)
      for (const auto &curve : rabi.f)
        dominates = dominates && curve[i] >= tr2l_pi_pulse_fidelity(eps);
  }
  report(7, "pi-pulse baseline", curve_err <= 1e-12 && dominates,
         fmt("max |pi - sin^2|=%.1e (<=1e-12); rescaled >= pi pulse on (0,0.2]: ",
             curve_err) +
             (dominates ? "yes" : "no"));
}

tr2l_matrix2 to_c(const Eigen::Matrix2cd &m) {
  tr2l_matrix2 out;
  for (int i = 0; i < 4; ++i) {
    out.re[i] = m(i / 2, i % 2).real();
    out.im[i] = m(i / 2, i % 2).imag();
  }
  return out;
}

void criterion8() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> ubeta(0.0, 5.0), uscale(0.1, 3.0);
  const double grid[] = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  double worst_moment = 0, worst_chi = 0;
  bool good = true;
  const int instances = 200;
  for (int i = 0; i < instances && good; ++i) {
    Eigen::Matrix2cd m, hi, hf;
    for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = cplx(g(rng), g(rng));
    Eigen::Matrix2cd u = Eigen::HouseholderQR<Eigen::Matrix2cd>(m).householderQ();
    for (Eigen::Matrix2cd *h : {&hi, &hf}) {
      const double s = uscale(rng);
      (*h) << s * g(rng), s * cplx(g(rng), g(rng)), 0.0, s * g(rng);
      (*h)(1, 0) = std::conj((*h)(0, 1));
    }
    const double beta = ubeta(rng);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> ei(hi), ef(hf);
    const Eigen::Vector2d ev = ei.eigenvalues(), fv = ef.eigenvalues();
    double z = 0, mean = 0, second = 0;
    double w[4], pr[4];
    for (int n = 0; n < 2; ++n) z += std::exp(-beta * (ev(n) - ev(0)));
    for (int n = 0; n < 2; ++n)
      for (int k = 0; k < 2; ++k) {
        const cplx amp = ef.eigenvectors().col(k).dot(u * ei.eigenvectors().col(n));
        w[2 * n + k] = fv(k) - ev(n);
        pr[2 * n + k] = std::exp(-beta * (ev(n) - ev(0))) / z * std::norm(amp);
        mean += pr[2 * n + k] * w[2 * n + k];
        second += pr[2 * n + k] * w[2 * n + k] * w[2 * n + k];
      }

    const tr2l_matrix2 cu = to_c(u), chi = to_c(hi), chf = to_c(hf);
    tr2l_work_moments wm;
    good = ok(tr2l_work_moments_of(&cu, &chi, &chf, beta, &wm));
    const double scale = hi.norm() + hf.norm();
    auto rel = [](double x, double y, double s) {
      return std::abs(x - y) / std::max({std::abs(x), std::abs(y), s});
    };
    worst_moment = std::max({worst_moment, rel(wm.mean, mean, scale),
                             rel(wm.second, second, scale * scale),
                             rel(wm.variance, second - mean * mean, scale * scale)});
    for (double r : grid) {
      cplx sum = 0;
      for (int k = 0; k < 4; ++k) sum += pr[k] * std::exp(cplx(0, r * w[k]));
      double re = 0, im = 0;
      good = good && ok(tr2l_work_characteristic(r, &cu, &chi, &chf, beta, &re, &im));
      worst_chi = std::max(worst_chi, std::abs(cplx(re, im) - sum));
    }
  }
  report(8, "work-statistics oracle", good && worst_moment <= 1e-12 && worst_chi <= 1e-12,
         fmt("%g instances: moments rel err %.1e, chi(r) err %.1e (<=1e-12)",
             instances, worst_moment, worst_chi));
}

void criterion9() {
  tr2l_ae_params p = defaults();
  const double as[] = {2.0, 5.0, 10.0};
  const double betas[] = {0.1, 1.0, 10.0};
  const auto start = Clock::now();
  tr2l_work_report *r = nullptr;
  bool good = ok(tr2l_work_compare(&p, as, 3, betas, 3, nullptr, &r)) &&
              tr2l_work_report_size(r) == 9;
  double mean_gap = 0, fluct_gap = 0;
  for (size_t i = 0; good && i < tr2l_work_report_size(r); ++i) {
    tr2l_work_row row;
    good = ok(tr2l_work_report_row_at(r, i, &row));
    mean_gap = std::max(mean_gap, row.mean_gap);
    fluct_gap = std::max(fluct_gap, row.fluct_gap);
  }
  tr2l_work_report_destroy(r);
  const double secs = seconds_since(start);
  report(9, "work equality theorems",
         good && mean_gap <= 1e-6 && fluct_gap <= 1e-6 && secs < 10.0,
         fmt("max |<W> gap|=%.1e max |dW gap|=%.1e (<=1e-6) runtime=%.3fs (<10s)",
             mean_gap, fluct_gap, secs));
}

void criterion10() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  tr2l_ae_params p = defaults();
  double unitarity = 0, norm = 0, composition = 0, boundary = 0, round_trip = 0;
  bool good = true;

  for (int i = 0; i < 20 && good; ++i) {
    tr2l_ae_params q{0.5 + 3.5 * u01(rng), 0.5 + 2 * u01(rng), 0.5 + u01(rng)};
    const double a = 0.5 + 11.5 * u01(rng);
    tr2l_drive *d = nullptr;
    tr2l_propagator u;
    tr2l_trajectory *t = nullptr;
    tr2l_state psi0{std::cos(1.0 + i), 0.0, 0.0, std::sin(1.0 + i)};
    good = ok(tr2l_drive_create_rescaled(&q, a, 0, 0, &d)) &&
           ok(tr2l_evolve(d, 3000, &u)) &&
           ok(tr2l_trajectory_create(d, 3000, &psi0, &t));
    if (good) {
      Eigen::Matrix2cd m;
      for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = cplx(u.u.re[k], u.u.im[k]);
      unitarity = std::max(unitarity, (m.adjoint() * m - Eigen::Matrix2cd::Identity()).norm());
      for (size_t k = 0; k < tr2l_trajectory_size(t); ++k) {
        tr2l_trajectory_point pt;
        good = good && ok(tr2l_trajectory_point_at(t, k, &pt));
        norm = std::max(norm, std::abs(std::sqrt(pt.p1 + pt.p2) - 1.0));
      }
    }
    tr2l_trajectory_destroy(t);
    tr2l_drive_destroy(d);
  }

  for (double a : {1.0, 2.0, 5.0, 10.0}) {
    tr2l_protocol_check c;
    good = good && ok(tr2l_check_protocol(&p, a, nullptr, &c));
    composition = std::max({composition, c.composition_rabi, c.composition_detuning});
    boundary = std::max({boundary, c.boundary_rabi, c.boundary_detuning});
  }

  for (int i = 0; i < 1000 && good; ++i) {
    const double a = 0.5 + 19.5 * u01(rng), t_f = 8.0, t = u01(rng) * t_f;
    double tau = 0, back = 0;
    good = ok(tr2l_rescale_inverse(a, t_f, t, &tau)) &&
           ok(tr2l_rescale_eval(a, t_f, tau, &back));
    round_trip = std::max(round_trip, std::abs(back - t) / t_f);
  }

  report(10, "property suites",
         good && unitarity <= 1e-10 && norm <= 1e-10 && composition <= 1e-12 &&
             boundary <= 1e-12 && round_trip <= 1e-11,
         fmt("unitarity %.1e norm %.1e composition %.1e boundary %.1e", unitarity, norm,
             composition, boundary) +
             fmt(" round trip %.1e", round_trip));
}

} // namespace

int main() {
  std::printf("tr2l %s acceptance suite\n", tr2l_version());
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criteria5to7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%s: %d criterion failure(s)\n", failures ? "FAILED" : "PASSED", failures);
  return failures ? 1 : 0;
}
