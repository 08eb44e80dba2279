#include "kinavg/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "kinavg/errors.hpp"
#include "kinavg/rational.hpp"
#include "kinavg/special.hpp"

namespace kinavg {

namespace {

double pow00(double x, double y) { return (x == 0.0 && y == 0.0) ? 1.0 : std::pow(x, y); }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

cplx SymbolSpec::operator()(std::span<const double> xi, double tau) const {
  double s = 0.0;
  for (double c : xi) s += c * c;
  return profile(std::sqrt(s), tau);
}

bool region_contains(const SupportTag& tag, double xn, double tau) {
  switch (tag.region) {
    case Region::all: return true;
    case Region::cone: return std::abs(tau) <= xn;
    case Region::annulus: return xn >= 0.5 && xn <= 2.0;
    case Region::shell: {
      const double s = xn - tau;
      return tau > 0.0 && xn >= 0.5 && xn <= 2.0 && s >= std::ldexp(1.0, -tag.k - 1) && s <= std::ldexp(1.0, -tag.k + 1);
    }
    case Region::forward:
      return tau >= 0.0 && xn >= 0.5 && xn <= 2.0 && xn - tau >= std::ldexp(1.0, -tag.k);
  }
  return true;
}

bool SymbolSpec::in_support(double xn, double tau) const {
  return std::all_of(support.begin(), support.end(), [&](const SupportTag& t) { return region_contains(t, xn, tau); });
}

double SymbolSpec::cone_exponent() const {
  double e = 0.0;
  for (const auto& s : singularities) {
    if (s.locus == Locus::cone) e += s.exponent;
  }
  return e;
}

bool SymbolSpec::cone_singular() const {
  return std::any_of(singularities.begin(), singularities.end(),
                     [](const Singularity& s) { return s.locus == Locus::cone && s.singular(); });
}

bool SymbolSpec::origin_singular() const {
  return std::any_of(singularities.begin(), singularities.end(),
                     [](const Singularity& s) { return s.locus == Locus::origin && s.singular(); });
}

SymbolSpec operator*(const SymbolSpec& a, const SymbolSpec& b) {
  SymbolSpec out;
  out.name = a.name + "*" + b.name;
  out.profile = [pa = a.profile, pb = b.profile](double xn, double tau) { return pa(xn, tau) * pb(xn, tau); };
  out.support = a.support;
  out.support.insert(out.support.end(), b.support.begin(), b.support.end());
  out.singularities = a.singularities;
  out.singularities.insert(out.singularities.end(), b.singularities.begin(), b.singularities.end());
  out.term_count = std::max(a.term_count, b.term_count);
  return out;
}

SymbolSpec one_symbol() {
  return SymbolSpec{"one", [](double, double) { return cplx(1.0); }, {}, {}, 0};
}

SymbolSpec annulus_symbol() {
  return SymbolSpec{"phi", [](double xn, double) { return cplx(bump(xn)); }, {{Region::annulus, 0}}, {}, 0};
}

SymbolSpec d_plus_symbol(double beta) {
  SymbolSpec s;
  s.name = "dplus:" + fmt(beta);
  s.profile = [beta](double xn, double tau) { return cplx(pow00(xn + std::abs(tau), beta)); };
  s.singularities = {{Locus::origin, beta}};
  return s;
}

SymbolSpec d_minus_symbol(double beta) {
  SymbolSpec s;
  s.name = "dminus:" + fmt(beta);
  s.profile = [beta](double xn, double tau) { return cplx(pow00(std::abs(xn - std::abs(tau)), beta)); };
  s.singularities = {{Locus::cone, beta}};
  return s;
}

SymbolSpec cone_symbol(double alpha) {
  require(alpha > -1.0, "cone multiplier order must exceed -1");
  SymbolSpec s;
  s.name = "cone:" + fmt(alpha);
  s.profile = [alpha](double xn, double tau) {
    if (xn == 0.0 || std::abs(tau) > xn) return cplx(0.0);
    const double phi = bump(xn);
    if (phi == 0.0) return cplx(0.0);
    const double l = tau / xn;
    return cplx(pow00(1.0 - l * l, alpha) * phi);
  };
  s.support = {{Region::cone, 0}, {Region::annulus, 0}};
  s.singularities = {{Locus::cone, alpha}};
  return s;
}

double psi_alpha(double alpha, double s) { return s > 0.0 ? std::pow(s, alpha) * bump(s) : 0.0; }

SymbolSpec dyadic_cone_symbol(int k, double alpha, int k0) {
  require(k >= k0, "dyadic cone piece needs k >= k0 = " + std::to_string(k0));
  SymbolSpec s;
  s.name = "ck:" + std::to_string(k) + (alpha != 0.0 ? ",a=" + fmt(alpha) : "");
  s.profile = [k, alpha](double xn, double tau) {
    if (!(tau > 0.0)) return cplx(0.0);
    return cplx(bump(xn) * psi_alpha(alpha, std::ldexp(xn - tau, k)));
  };
  s.support = {{Region::shell, k}};
  return s;
}

std::vector<double> mono_decompose(double alpha, double s, int k_lo, int k_hi) {
  require(s > 0.0, "decomposition needs s > 0");
  require(k_lo <= k_hi, "empty dyadic window");
  std::vector<double> sums;
  double acc = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    acc += std::pow(2.0, -k * alpha) * psi_alpha(alpha, std::ldexp(s, k));
    sums.push_back(acc);
  }
  return sums;
}

SymbolSpec m0_symbol(double beta_minus, int k0) {
  require(k0 >= 1, "m0 needs k0 >= 1");
  constexpr int k_first = -3;  // 2^{-3}(|xi| - tau) < 1/2 on the support, so earlier terms vanish
  SymbolSpec s;
  s.name = "m0:bm=" + fmt(beta_minus) + ",k0=" + std::to_string(k0);
  s.profile = [beta_minus, k0](double xn, double tau) {
    if (tau < 0.0) return cplx(0.0);
    const double phi = bump(xn);
    if (phi == 0.0) return cplx(0.0);
    double sum = 0.0;
    for (int k = k_first; k <= k0 - 1; ++k) {
      sum += std::pow(2.0, -k * beta_minus) * psi_alpha(beta_minus, std::ldexp(xn - tau, k));
    }
    return cplx(phi * sum);
  };
  s.support = {{Region::forward, k0}};
  s.term_count = k0 - k_first;
  return s;
}

SymbolSpec m_kappa_symbol(int d, double kappa, double beta_plus, double beta_minus) {
  require(d >= 2, "dimension must be at least 2");
  require(kappa >= -1.0 && kappa <= 0.0, "kappa must lie in [-1, 0]");
  const double c = sphere_area(d - 2) * std::tgamma(0.5 * (d - 1)) / (2.0 * std::tgamma(0.5 * (d + 1) + kappa));
  const double root = std::sqrt(c);
  const double alpha = beta_minus + 0.5 * kappa + 0.25 * (d - 1);
  const double radial = beta_plus + beta_minus - 0.5;
  SymbolSpec s;
  s.name = "mkappa:d=" + std::to_string(d) + ",k=" + fmt(kappa) + ",bp=" + fmt(beta_plus) + ",bm=" + fmt(beta_minus);
  s.profile = [=](double xn, double tau) {
    if (xn == 0.0 || std::abs(tau) > xn) return cplx(0.0);
    const double l = std::abs(tau) / xn;
    return cplx(root * std::pow(xn, radial) * std::pow(1.0 + l, beta_plus - beta_minus) * pow00(1.0 - l * l, alpha));
  };
  s.support = {{Region::cone, 0}};
  s.singularities = {{Locus::cone, alpha}, {Locus::spatial_origin, radial}};
  return s;
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double number(const std::string& text, const std::string& ctx) {
  try {
    return Rational::parse(text).to_double();
  } catch (const InputError&) {
    throw InputError("bad number '" + text + "' in symbol factor '" + ctx + "'");
  }
}

// "a=1,b=2" -> map; a leading bare value is stored under "".
std::map<std::string, std::string> keyed(const std::string& args, const std::string& ctx) {
  std::map<std::string, std::string> out;
  std::stringstream ss(args);
  std::string item;
  bool first = true;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      if (!first) throw InputError("expected key=value in symbol factor '" + ctx + "'");
      out[""] = item;
    } else {
      out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    first = false;
  }
  return out;
}

std::string take(std::map<std::string, std::string>& m, const std::string& key, const std::string& ctx) {
  const auto it = m.find(key);
  if (it == m.end()) throw InputError("symbol factor '" + ctx + "' is missing '" + (key.empty() ? "value" : key) + "'");
  std::string v = it->second;
  m.erase(it);
  return v;
}

void expect_empty(const std::map<std::string, std::string>& m, const std::string& ctx) {
  if (!m.empty()) throw InputError("unknown key '" + m.begin()->first + "' in symbol factor '" + ctx + "'");
}

SymbolSpec parse_factor(const std::string& raw) {
  const std::string f = trim(raw);
  const auto colon = f.find(':');
  const std::string head = trim(f.substr(0, colon));
  const std::string args = colon == std::string::npos ? "" : f.substr(colon + 1);
  if (head == "one" || head == "1") return one_symbol();
  if (head == "phi") return annulus_symbol();
  auto kv = keyed(args, f);
  if (head == "dplus" || head == "dminus" || head == "cone") {
    const double v = number(take(kv, "", f), f);
    expect_empty(kv, f);
    if (head == "dplus") return d_plus_symbol(v);
    if (head == "dminus") return d_minus_symbol(v);
    return cone_symbol(v);
  }
  if (head == "ck") {
    const int k = static_cast<int>(number(take(kv, "", f), f));
    const double a = kv.count("a") ? number(take(kv, "a", f), f) : 0.0;
    const int k0 = kv.count("k0") ? static_cast<int>(number(take(kv, "k0", f), f)) : default_k0;
    expect_empty(kv, f);
    return dyadic_cone_symbol(k, a, k0);
  }
  if (head == "m0") {
    const double bm = number(take(kv, "bm", f), f);
    const int k0 = kv.count("k0") ? static_cast<int>(number(take(kv, "k0", f), f)) : default_k0;
    expect_empty(kv, f);
    return m0_symbol(bm, k0);
  }
  if (head == "mkappa") {
    const int d = static_cast<int>(number(take(kv, "d", f), f));
    const double k = number(take(kv, "k", f), f);
    const double bp = number(take(kv, "bp", f), f);
    const double bm = number(take(kv, "bm", f), f);
    expect_empty(kv, f);
    return m_kappa_symbol(d, k, bp, bm);
  }
  throw InputError("unknown symbol factor '" + f + "'");
}

}  // namespace

SymbolSpec parse_symbol(const std::string& text) {
  if (trim(text).empty()) throw InputError("empty symbol");
  std::vector<SymbolSpec> parts;
  std::size_t start = 0;
  while (true) {
    const auto star = text.find('*', start);
    const std::string factor = text.substr(start, star == std::string::npos ? std::string::npos : star - start);
    if (trim(factor).empty()) throw InputError("empty factor in symbol '" + text + "'");
    parts.push_back(parse_factor(factor));
    if (star == std::string::npos) break;
    start = star + 1;
  }
  SymbolSpec out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = out * parts[i];
  return out;
}

SpatialField half_wave(const SpatialField& h, double t) {
  SpatialField hat = h.domain() == Domain::frequency ? h : forward_transform(h);
  const SpatialGrid& g = h.grid();
  auto data = hat.samples();
  for (std::size_t idx = 0; idx < g.size(); ++idx) data[idx] *= std::polar(1.0, t * g.freq_norm(idx));
  SpatialField out = inverse_transform(hat);
  const double scale = std::pow(2.0 * std::numbers::pi, g.d);
  for (auto& v : out.samples()) v *= scale;
  return out;
}

}  // namespace kinavg
