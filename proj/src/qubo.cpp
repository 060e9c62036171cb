#include "vqpm/qubo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vqpm/errors.hpp"
#include "vqpm/io_util.hpp"
#include "vqpm/rng.hpp"

namespace vqpm {

QuboInstance::QuboInstance(std::size_t n) : n_(n), coeffs_(n * (n + 1) / 2, 0.0) {
  if (n == 0) throw std::invalid_argument("QuboInstance: n must be positive");
}

std::size_t QuboInstance::offset(std::size_t i, std::size_t j) const {
  if (i > j || j >= n_)
    throw std::invalid_argument("QuboInstance: coefficient index out of range");
  // Row i starts after rows 0..i-1, which hold n + (n-1) + ... + (n-i+1) entries.
  return i * n_ - i * (i - 1) / 2 + (j - i);
}

double QuboInstance::coeff(std::size_t i, std::size_t j) const {
  return coeffs_[offset(i, j)];
}

void QuboInstance::set_coeff(std::size_t i, std::size_t j, double value) {
  if (!std::isfinite(value))
    throw std::invalid_argument("QuboInstance: coefficient must be finite");
  coeffs_[offset(i, j)] = value;
}

QuboInstance generate_random(std::size_t n, std::uint64_t seed, Interval coeff_range) {
  if (!(coeff_range.lo <= coeff_range.hi))
    throw std::invalid_argument("generate_random: empty coefficient range");
  QuboInstance q(n);
  std::mt19937_64 gen(seed);
  // Fill row-major over the upper triangle so a seed pins the instance exactly.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      q.set_coeff(i, j, coeff_range.lo + uniform01(gen) * (coeff_range.hi - coeff_range.lo));
  return q;
}

double energy(const QuboInstance& q, const Bitstring& x) {
  if (x.size() != q.n())
    throw std::invalid_argument("energy: assignment size does not match instance");
  double e = 0.0;
  for (std::size_t i = 0; i < q.n(); ++i) {
    if (!x.bit(i)) continue;
    e += q.coeff(i, i);
    for (std::size_t j = i + 1; j < q.n(); ++j)
      if (x.bit(j)) e += q.coeff(i, j);
  }
  return e;
}

EnergyBounds energy_bounds(const QuboInstance& q) {
  EnergyBounds b;
  for (double c : q.coeffs()) {
    if (c < 0.0) b.lower += c;
    else b.upper += c;
  }
  return b;
}

InfluenceScores influence_scores(const QuboInstance& q) {
  const std::size_t n = q.n();
  std::vector<double> row_sums(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    row_sums[i] += std::abs(q.coeff(i, i));
    for (std::size_t j = i + 1; j < n; ++j) {
      double c = std::abs(q.coeff(i, j));
      row_sums[i] += c;
      row_sums[j] += c;  // symmetrized matrix: q_ij counts toward both rows
    }
  }
  double max_sum = *std::max_element(row_sums.begin(), row_sums.end());
  InfluenceScores out;
  // An all-zero instance carries no signal; treat every variable as equally
  // (maximally) influential rather than dividing by zero.
  out.scores.resize(n, 1.0);
  if (max_sum > 0.0)
    for (std::size_t i = 0; i < n; ++i) out.scores[i] = row_sums[i] / max_sum;
  return out;
}

std::vector<double> enumerate_energies(const QuboInstance& q, std::size_t max_n) {
  const std::size_t n = q.n();
  if (n > max_n)
    throw ResourceLimitError("enumerate_energies: n = " + std::to_string(n) +
                             " exceeds cap of " + std::to_string(max_n));
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<double> energies(dim, 0.0);

  // Gray-code walk: consecutive counter values differ in exactly one bit of
  // gray(c) = c ^ (c >> 1), so each step updates the energy with one row of
  // couplings instead of re-evaluating from scratch.
  double e = 0.0;
  std::uint64_t state = 0;
  energies[0] = 0.0;
  for (std::uint64_t c = 1; c < dim; ++c) {
    const std::size_t p = std::countr_zero(c);
    const bool turning_on = ((state >> p) & 1u) == 0;
    double delta = q.coeff(p, p);
    std::uint64_t others = state & ~(std::uint64_t{1} << p);
    while (others) {
      const std::size_t j = std::countr_zero(others);
      others &= others - 1;
      delta += (j < p) ? q.coeff(j, p) : q.coeff(p, j);
    }
    e += turning_on ? delta : -delta;
    state ^= std::uint64_t{1} << p;
    energies[state] = e;
  }
  return energies;
}

OracleResult brute_force_solve(const QuboInstance& q, std::size_t max_n) {
  if (q.n() > max_n)
    throw ResourceLimitError("brute_force_solve: n = " + std::to_string(q.n()) +
                             " exceeds cap of " + std::to_string(max_n));
  std::vector<double> energies = enumerate_energies(q, max_n);

  OracleResult r;
  r.min_energy = *std::min_element(energies.begin(), energies.end());
  for (std::uint64_t x = 0; x < energies.size(); ++x)
    if (energies[x] == r.min_energy) r.argmin.push_back(Bitstring::from_index(x, q.n()));

  r.sorted_spectrum = energies;
  std::sort(r.sorted_spectrum.begin(), r.sorted_spectrum.end());
  r.eigengap = r.sorted_spectrum.size() >= 2
                   ? r.sorted_spectrum[1] - r.sorted_spectrum[0]
                   : 0.0;
  return r;
}

QuboInstance read_instance(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw std::runtime_error("instance: line " + std::to_string(line_no) + ": " + msg);
  };

  std::size_t n = 0;
  bool have_n = false;
  QuboInstance q(1);
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    std::istringstream fields(line);
    if (!have_n) {
      std::string tok;
      fields >> tok;
      std::string rest;
      if (fields >> rest) fail("expected only the variable count");
      std::uint64_t parsed = 0;
      try {
        parsed = parse_uint(tok);
      } catch (const std::runtime_error& e) {
        fail(e.what());
      }
      if (parsed == 0 || parsed > 64) fail("variable count must be in 1..64");
      n = static_cast<std::size_t>(parsed);
      q = QuboInstance(n);
      have_n = true;
      continue;
    }

    std::string si, sj, sv, extra;
    fields >> si >> sj >> sv;
    if (sv.empty()) fail("expected 'i j value'");
    if (fields >> extra) fail("trailing characters after 'i j value'");
    std::uint64_t i = 0;
    std::uint64_t j = 0;
    double v = 0.0;
    try {
      i = parse_uint(si);
      j = parse_uint(sj);
      v = parse_double(sv);
    } catch (const std::runtime_error& e) {
      fail(e.what());
    }
    if (i > j || j >= n) fail("index pair out of range (need i <= j < n)");
    if (!std::isfinite(v)) fail("coefficient must be finite");
    q.set_coeff(i, j, v);
  }
  if (!have_n) fail("missing variable count line");
  return q;
}

QuboInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  return read_instance(in);
}

void write_instance(std::ostream& out, const QuboInstance& q) {
  out << q.n() << "\n";
  for (std::size_t i = 0; i < q.n(); ++i)
    for (std::size_t j = i; j < q.n(); ++j)
      if (q.coeff(i, j) != 0.0)
        out << i << " " << j << " " << format_double(q.coeff(i, j)) << "\n";
}

}  // namespace vqpm
