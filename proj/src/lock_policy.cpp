#include "vqpm/lock_policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vqpm/io_util.hpp"

namespace vqpm {

void LockRegister::lock(std::size_t q, int bit) {
  if (bit != 0 && bit != 1)
    throw std::invalid_argument("LockRegister::lock: bit must be 0 or 1");
  int& slot = bits_.at(q);
  if (slot >= 0)
    throw std::invalid_argument("LockRegister::lock: qubit " + std::to_string(q) +
                                " is already locked");
  slot = bit;
}

std::size_t LockRegister::locked_count() const {
  std::size_t c = 0;
  for (int b : bits_)
    if (b >= 0) ++c;
  return c;
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

ThresholdPolicy::ThresholdPolicy(FixedThreshold f) : v_(f) {
  require(std::isfinite(f.p) && f.p > 0.0, "FixedThreshold: p must be positive");
}

ThresholdPolicy::ThresholdPolicy(GeometricDecay d) : v_(d) {
  require(std::isfinite(d.p0) && d.p0 > 0.0, "GeometricDecay: p0 must be positive");
  require(std::isfinite(d.floor) && d.floor > 0.0, "GeometricDecay: floor must be positive");
}

ThresholdPolicy::ThresholdPolicy(HoeffdingThreshold h) : v_(h) {
  require(h.delta_total > 0.0 && h.delta_total < 2.0,
          "HoeffdingThreshold: delta_total must be in (0, 2)");
  require(h.shots >= 1, "HoeffdingThreshold: shots must be >= 1");
  require(h.max_iter >= 1, "HoeffdingThreshold: max_iter must be >= 1");
  require(h.clamp.lo <= h.clamp.hi, "HoeffdingThreshold: clamp interval is empty");
}

ThresholdPolicy::ThresholdPolicy(InfluenceWeighted w) : v_(std::move(w)) {
  const auto& iw = std::get<InfluenceWeighted>(v_);
  require(iw.base != nullptr, "InfluenceWeighted: missing base policy");
  require(!iw.scores.scores.empty(), "InfluenceWeighted: empty influence scores");
  for (double s : iw.scores.scores)
    require(s >= 0.0 && s <= 1.0, "InfluenceWeighted: scores must be in [0, 1]");
}

ThresholdPolicy::ThresholdPolicy(BitSignificance b) : v_(std::move(b)) {
  const auto& bs = std::get<BitSignificance>(v_);
  require(bs.base != nullptr, "BitSignificance: missing base policy");
  require(!bs.profile.empty(), "BitSignificance: empty multiplier profile");
  for (double m : bs.profile)
    require(std::isfinite(m) && m > 0.0, "BitSignificance: multipliers must be positive");
}

double hoeffding_epsilon(double delta_i, std::size_t n, int shots) {
  if (!(delta_i > 0.0 && delta_i < 2.0))
    throw std::invalid_argument("hoeffding_epsilon: delta_i must be in (0, 2)");
  if (n < 1 || shots < 1)
    throw std::invalid_argument("hoeffding_epsilon: n and shots must be >= 1");
  const double samples = 10.0 * static_cast<double>(n) * static_cast<double>(shots);
  return std::sqrt(std::log(2.0 / delta_i) / (2.0 * samples));
}

double delta_schedule(double delta_total, int remaining) {
  if (remaining < 1)
    throw std::invalid_argument("delta_schedule: remaining iterations must be >= 1");
  return delta_total / static_cast<double>(remaining);
}

std::vector<double> bit_significance_profile(std::size_t n, double scale) {
  if (!(std::isfinite(scale) && scale > 0.0))
    throw std::invalid_argument("bit_significance_profile: scale must be positive");
  std::vector<double> profile(n);
  double m = 1.0;
  for (std::size_t q = 0; q < n; ++q) {
    profile[q] = m;
    m *= scale;
  }
  return profile;
}

namespace {

struct ThresholdVisitor {
  int k;
  std::size_t q;
  std::size_t n;

  double operator()(const FixedThreshold& f) const { return f.p; }

  double operator()(const GeometricDecay& d) const {
    double f_k;
    if (d.law == GeometricDecay::Law::Pow2) {
      f_k = std::ldexp(1.0, k);  // 2^k
    } else {
      f_k = static_cast<double>(k);
    }
    return std::max(d.p0 / f_k, d.floor);
  }

  double operator()(const HoeffdingThreshold& h) const {
    // The failure budget is spread evenly over the full horizon, so the
    // per-iteration slice (and hence the threshold) is the same at every k.
    const double delta_i = delta_schedule(h.delta_total, h.max_iter);
    const double eps = hoeffding_epsilon(delta_i, n, h.shots);
    return std::clamp(eps, h.clamp.lo, h.clamp.hi);
  }

  double operator()(const InfluenceWeighted& w) const {
    if (q >= w.scores.scores.size())
      throw std::invalid_argument("threshold_for: qubit index beyond influence scores");
    const double base = threshold_for(*w.base, k, q, n);
    const double score = w.scores.scores[q];
    // Zero influence divides to +inf, which the clamp (if any) caps; without
    // a clamp such a qubit simply never locks.
    double value = base / score;
    if (const auto* h = std::get_if<HoeffdingThreshold>(&w.base->variant()))
      value = std::clamp(value, h->clamp.lo, h->clamp.hi);
    return value;
  }

  double operator()(const BitSignificance& b) const {
    if (q >= b.profile.size())
      throw std::invalid_argument("threshold_for: qubit index beyond significance profile");
    return threshold_for(*b.base, k, q, n) * b.profile[q];
  }
};

}  // namespace

double threshold_for(const ThresholdPolicy& policy, int k, std::size_t q, std::size_t n) {
  if (k < 1) throw std::invalid_argument("threshold_for: iteration k must be >= 1");
  if (q >= n) throw std::invalid_argument("threshold_for: qubit index out of range");
  return std::visit(ThresholdVisitor{k, q, n}, policy.variant());
}

LockDecision decide_locks(const QubitMarginals& marginals, const ThresholdPolicy& policy,
                          LockRegister locks, int k) {
  const std::size_t n = marginals.n();
  if (locks.n() != n)
    throw std::invalid_argument("decide_locks: register size does not match marginals");
  LockDecision decision{std::move(locks), {}};
  for (std::size_t q = 0; q < n; ++q) {
    if (decision.locks.is_locked(q)) continue;
    const QubitMarginal& m = marginals.per_qubit[q];
    if (m.p0 == m.p1) continue;  // an exact tie carries no direction to lock onto
    const double threshold = threshold_for(policy, k, q, n);
    if (std::abs(m.p0 - m.p1) >= threshold) {
      const int bit = m.p0 > m.p1 ? 0 : 1;
      decision.locks.lock(q, bit);
      decision.events.push_back(LockEvent{q, bit, k, threshold});
    }
  }
  return decision;
}

namespace {

std::vector<std::pair<std::string, std::string>> parse_params(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> params;
  if (text.empty()) return params;
  for (const std::string& item : split(text, ',')) {
    const std::string entry = trim(item);
    if (entry.empty())
      throw std::invalid_argument("policy: empty parameter in '" + text + "'");
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("policy: expected key=value, got '" + entry + "'");
    params.emplace_back(trim(entry.substr(0, eq)), trim(entry.substr(eq + 1)));
  }
  return params;
}

double param_double(const std::pair<std::string, std::string>& kv) {
  try {
    return parse_double(kv.second);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument("policy: parameter '" + kv.first + "': " + e.what());
  }
}

Interval param_clamp(const std::pair<std::string, std::string>& kv) {
  const auto parts = split(kv.second, ':');
  if (parts.size() != 2)
    throw std::invalid_argument("policy: clamp must look like lo:hi, got '" + kv.second + "'");
  Interval c;
  c.lo = param_double({kv.first, parts[0]});
  c.hi = param_double({kv.first, parts[1]});
  return c;
}

HoeffdingThreshold parse_hoeffding(
    const std::vector<std::pair<std::string, std::string>>& params, const PolicyContext& ctx) {
  HoeffdingThreshold h;
  h.max_iter = ctx.max_iter;
  for (const auto& kv : params) {
    if (kv.first == "delta") {
      h.delta_total = param_double(kv);
    } else if (kv.first == "M") {
      h.shots = static_cast<int>(param_double(kv));
    } else if (kv.first == "clamp") {
      h.clamp = param_clamp(kv);
    } else {
      throw std::invalid_argument("policy: unknown hoeffding parameter '" + kv.first + "'");
    }
  }
  return h;
}

}  // namespace

ThresholdPolicy make_policy(const std::string& text, const PolicyContext& ctx) {
  const std::string spec = trim(text);
  const std::size_t colon = spec.find(':');
  const std::string name = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

  if (name == "none") {
    if (!rest.empty()) throw std::invalid_argument("policy: 'none' takes no parameters");
    return FixedThreshold{2.0};
  }
  if (name == "fixed") {
    if (rest.empty()) throw std::invalid_argument("policy: fixed needs a threshold, e.g. fixed:0.01");
    return FixedThreshold{param_double({"fixed", rest})};
  }
  if (name == "decay") {
    GeometricDecay d;
    bool have_p0 = false;
    for (const auto& kv : parse_params(rest)) {
      if (kv.first == "p0") {
        d.p0 = param_double(kv);
        have_p0 = true;
      } else if (kv.first == "floor") {
        d.floor = param_double(kv);
      } else if (kv.first == "law") {
        if (kv.second == "pow2") d.law = GeometricDecay::Law::Pow2;
        else if (kv.second == "linear") d.law = GeometricDecay::Law::Linear;
        else throw std::invalid_argument("policy: unknown decay law '" + kv.second + "'");
      } else {
        throw std::invalid_argument("policy: unknown decay parameter '" + kv.first + "'");
      }
    }
    if (!have_p0) throw std::invalid_argument("policy: decay needs p0, e.g. decay:p0=0.16");
    return d;
  }
  if (name == "hoeffding") {
    return parse_hoeffding(parse_params(rest), ctx);
  }
  if (name == "hoeffding+influence") {
    if (!ctx.influence)
      throw std::invalid_argument("policy: influence weighting needs instance influence scores");
    InfluenceWeighted w;
    w.base = std::make_shared<const ThresholdPolicy>(parse_hoeffding(parse_params(rest), ctx));
    w.scores = *ctx.influence;
    return w;
  }
  if (name == "bitsig") {
    double p = 0.01;
    double scale = 2.0;
    for (const auto& kv : parse_params(rest)) {
      if (kv.first == "p") p = param_double(kv);
      else if (kv.first == "scale") scale = param_double(kv);
      else throw std::invalid_argument("policy: unknown bitsig parameter '" + kv.first + "'");
    }
    BitSignificance b;
    b.base = std::make_shared<const ThresholdPolicy>(FixedThreshold{p});
    b.profile = bit_significance_profile(ctx.n, scale);
    return b;
  }
  throw std::invalid_argument("policy: unknown strategy '" + name + "'");
}

}  // namespace vqpm
