#include "tr2l/workstats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "tr2l/error.hpp"

namespace tr2l {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kUnitaryTolerance = 1e-8;

void check_hermitian(const Matrix2c &h) {
  const double scale = std::max(1.0, h.norm());
  if ((h - h.adjoint()).norm() > kHermitianTolerance * scale)
    throw InvalidArgument("Hamiltonian is not Hermitian");
}

void check_unitary(const Matrix2c &u) {
  const double defect = unitarity_defect(u);
  if (!(defect <= kUnitaryTolerance)) {
    std::ostringstream msg;
    msg << "evolution operator is not unitary (||U^dag U - I|| = " << defect << ")";
    throw NonUnitaryError(msg.str());
  }
}

void check_thermal(const ThermalSpec &spec) {
  if (!(spec.beta_thermal >= 0.0) || !std::isfinite(spec.beta_thermal))
    throw InvalidArgument("inverse temperature must be finite and >= 0");
}

Vector2c normalized_with_phase(Vector2c v) {
  v.normalize();
  for (int i = 0; i < 2; ++i) {
    if (std::abs(v(i)) > 0.0) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      break;
    }
  }
  return v;
}

// exp(i r H) for Hermitian H = c0 I + h.sigma, in closed form.
Matrix2c hermitian_exp(const Matrix2c &h, double r) {
  const double c0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double hz = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const Complex off = h(0, 1); // hx - i hy
  const double len = std::hypot(hz, std::abs(off));
  Matrix2c out = Matrix2c::Identity() * std::cos(r * len);
  if (len > 0.0) {
    Matrix2c unit;
    unit << hz, off, std::conj(off), -hz;
    out += Complex(0.0, std::sin(r * len) / len) * unit;
  }
  return std::polar(1.0, r * c0) * out;
}

double real_trace(const Matrix2c &m) { return m.trace().real(); }

} // namespace

Eigenbasis2 eigenbasis(const Matrix2c &h) {
  check_hermitian(h);
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const Complex b = h(0, 1);
  const double c0 = 0.5 * (a + d);
  const double z = 0.5 * (a - d);
  const double r = std::hypot(z, std::abs(b));

  Eigenbasis2 out;
  out.energies = {c0 + r, c0 - r};
  if (r == 0.0) {
    out.vectors = {Vector2c(1.0, 0.0), Vector2c(0.0, 1.0)};
    return out;
  }
  // Pick the null vector of (h - E) that avoids cancellation in r +- z.
  Vector2c up, down;
  if (z >= 0.0) {
    up << r + z, std::conj(b);
    down << -b, r + z;
  } else {
    up << b, r - z;
    down << r - z, -std::conj(b);
  }
  out.vectors = {normalized_with_phase(up), normalized_with_phase(down)};
  return out;
}

GibbsState gibbs_state(const Matrix2c &h_i, const ThermalSpec &spec) {
  check_thermal(spec);
  GibbsState g;
  g.basis = eigenbasis(h_i);
  const double e_min = g.basis.energies[1];
  const double w_plus = std::exp(-spec.beta_thermal * (g.basis.energies[0] - e_min));
  const double z_rel = 1.0 + w_plus;
  g.probabilities = {w_plus / z_rel, 1.0 / z_rel};
  g.log_partition_function = -spec.beta_thermal * e_min + std::log(z_rel);
  g.rho = Matrix2c::Zero();
  for (int n = 0; n < 2; ++n)
    g.rho += g.probabilities[n] * g.basis.vectors[n] * g.basis.vectors[n].adjoint();
  return g;
}

Eigen::Matrix2d transition_matrix(const Matrix2c &u, const Matrix2c &h_i,
                                  const Matrix2c &h_f) {
  check_unitary(u);
  const Eigenbasis2 bi = eigenbasis(h_i);
  const Eigenbasis2 bf = eigenbasis(h_f);
  Eigen::Matrix2d t;
  for (int n = 0; n < 2; ++n)
    for (int m = 0; m < 2; ++m)
      t(n, m) = std::norm(bf.vectors[m].dot(u * bi.vectors[n]));
  return t;
}

double WorkDistribution::total_probability() const {
  double sum = 0.0;
  for (const WorkAtom &atom : atoms)
    sum += atom.probability;
  return sum;
}

WorkMoments WorkDistribution::moments() const {
  WorkMoments m;
  for (const WorkAtom &atom : atoms) {
    m.mean += atom.probability * atom.work;
    m.second += atom.probability * atom.work * atom.work;
  }
  double var = 0.0;
  for (const WorkAtom &atom : atoms)
    var += atom.probability * (atom.work - m.mean) * (atom.work - m.mean);
  m.variance = var;
  m.fluctuation = std::sqrt(std::max(var, 0.0));
  return m;
}

Complex WorkDistribution::characteristic(double r) const {
  Complex sum = 0.0;
  for (const WorkAtom &atom : atoms)
    sum += atom.probability * std::polar(1.0, r * atom.work);
  return sum;
}

WorkDistribution work_distribution(const Matrix2c &u, const Matrix2c &h_i,
                                   const Matrix2c &h_f, const ThermalSpec &spec) {
  const GibbsState g = gibbs_state(h_i, spec);
  const Eigen::Matrix2d t = transition_matrix(u, h_i, h_f);
  const Eigenbasis2 bf = eigenbasis(h_f);

  WorkDistribution dist;
  dist.initial_energies = g.basis.energies;
  dist.final_energies = bf.energies;
  for (int n = 0; n < 2; ++n) {
    for (int m = 0; m < 2; ++m) {
      WorkAtom &atom = dist.atoms[2 * n + m];
      atom.initial = n;
      atom.final = m;
      atom.work = bf.energies[m] - g.basis.energies[n];
      atom.probability = g.probabilities[n] * t(n, m);
    }
  }
  return dist;
}

Complex characteristic_function(double r, const Matrix2c &u, const Matrix2c &h_i,
                                const Matrix2c &h_f, const ThermalSpec &spec) {
  check_unitary(u);
  const GibbsState g = gibbs_state(h_i, spec);
  return (u.adjoint() * hermitian_exp(h_f, r) * u * hermitian_exp(h_i, -r) * g.rho)
      .trace();
}

WorkMoments moments(const Matrix2c &u, const Matrix2c &h_i, const Matrix2c &h_f,
                    const ThermalSpec &spec) {
  check_unitary(u);
  const GibbsState g = gibbs_state(h_i, spec);
  const Matrix2c &rho = g.rho;
  const Matrix2c hf_heis = u.adjoint() * h_f * u;

  const double hf_mean = real_trace(hf_heis * rho);
  const double hi_mean = real_trace(h_i * rho);
  const double hf_sq = real_trace(hf_heis * hf_heis * rho);
  const double hi_sq = real_trace(h_i * h_i * rho);
  const double cross = real_trace(hf_heis * h_i * rho);

  WorkMoments m;
  m.mean = hf_mean - hi_mean;
  m.second = hf_sq + hi_sq - 2.0 * cross;
  m.variance = hf_sq + hi_sq - 2.0 * cross - hf_mean * hf_mean -
               hi_mean * hi_mean + 2.0 * hf_mean * hi_mean;
  m.fluctuation = std::sqrt(std::max(m.variance, 0.0));
  return m;
}

ProtocolRun run_protocol(const Drive &drive, std::size_t n_steps) {
  return {evolve(drive, n_steps), hamiltonian(drive(drive.t_start())),
          hamiltonian(drive(drive.t_end()))};
}

bool EqualityReport::all_within(double tol) const {
  return std::all_of(rows.begin(), rows.end(),
                     [tol](const EqualityRow &r) { return r.within(tol); });
}

EqualityReport compare_protocols(const AEParams &params,
                                 const std::vector<double> &a_values,
                                 const std::vector<double> &betas,
                                 const GridPolicy &policy) {
  params.validate();
  if (a_values.empty() || betas.empty())
    throw InvalidArgument("need at least one contraction parameter and temperature");
  for (double a : a_values)
    if (!(a >= 1.0) || !std::isfinite(a))
      throw InvalidArgument("contraction parameters must be >= 1");
  for (double beta : betas)
    check_thermal(ThermalSpec{beta});

  const ProtocolRun reference =
      run_protocol(reference_drive(params), policy.reference_steps);

  std::vector<ProtocolRun> rescaled(a_values.size(), reference);
  detail::parallel_for(a_values.size(), [&](std::size_t i) {
    if (a_values[i] != 1.0)
      rescaled[i] = run_protocol(rescaled_drive(params, a_values[i]),
                                 policy.steps_for(a_values[i]));
  });

  EqualityReport report;
  for (std::size_t i = 0; i < a_values.size(); ++i) {
    const ProtocolRun &tr = rescaled[i];
    for (double beta : betas) {
      EqualityRow row;
      row.a = a_values[i];
      row.beta_thermal = beta;
      row.reference = moments(reference.propagator.u, reference.h_initial,
                              reference.h_final, ThermalSpec{beta});
      row.rescaled = moments(tr.propagator.u, tr.h_initial, tr.h_final,
                             ThermalSpec{beta});
      row.mean_gap = std::abs(row.rescaled.mean - row.reference.mean);
      row.fluctuation_gap =
          std::abs(row.rescaled.fluctuation - row.reference.fluctuation);
      row.propagator_distance =
          propagator_distance(reference.propagator, tr.propagator);
      report.rows.push_back(row);
    }
  }
  return report;
}

} // namespace tr2l
