// Copyright 2026 The atc-opt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "atc/lattice.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "atc/error.hpp"

namespace atc {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view s, std::string_view what) {
  // std::from_chars for double is available in libstdc++ 11.
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw_invalid("force spec: cannot parse " + std::string(what) + " from '" +
                  std::string(s) + "'");
  return value;
}

int parse_int(std::string_view s, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw_invalid("force spec: cannot parse " + std::string(what) + " from '" +
                  std::string(s) + "'");
  return value;
}

}  // namespace

ForceSpec ForceSpec::parse(std::string_view text) {
  auto parts = split(text, ':');
  ForceSpec spec;
  const auto kind = parts.front();
  if (kind == "zero") {
    if (parts.size() != 1) throw_invalid("force spec: 'zero' takes no parameters");
    spec.kind = Kind::zero;
  } else if (kind == "point") {
    if (parts.size() != 3) throw_invalid("force spec: expected point:<site>:<magnitude>");
    spec.kind = Kind::point;
    spec.site = parse_int(parts[1], "site");
    spec.magnitude = parse_double(parts[2], "magnitude");
  } else if (kind == "sine") {
    if (parts.size() > 2) throw_invalid("force spec: expected sine:<m>");
    spec.kind = Kind::sine;
    spec.mode = parts.size() == 2 ? parse_int(parts[1], "mode") : 1;
  } else if (kind == "poly") {
    if (parts.size() != 2) throw_invalid("force spec: expected poly:<c0>,<c1>,...");
    spec.kind = Kind::poly;
    for (auto c : split(parts[1], ','))
      spec.coefficients.push_back(parse_double(c, "coefficient"));
  } else {
    throw_invalid("force spec: unknown kind '" + std::string(kind) + "'");
  }
  return spec;
}

ForceSpec ForceSpec::from_table(std::vector<double> values) {
  ForceSpec spec;
  spec.kind = Kind::table;
  spec.table = std::move(values);
  return spec;
}

std::string ForceSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::zero: os << "zero"; break;
    case Kind::point: os << "point:" << site << ':' << magnitude; break;
    case Kind::sine: os << "sine:" << mode; break;
    case Kind::poly:
      os << "poly:";
      for (std::size_t j = 0; j < coefficients.size(); ++j)
        os << (j ? "," : "") << coefficients[j];
      break;
    case Kind::table: os << "table[" << table.size() << "]"; break;
  }
  if (scale != 1.0) os << " x " << scale;
  return os.str();
}

ChainModel::ChainModel(int n, double k1, double k2, std::vector<double> force)
    : n_(n), k1_(k1), k2_(k2), force_(std::move(force)) {}

ChainModel ChainModel::build(int n, double k1, double k2, const ForceSpec& spec) {
  if (!(k1 > 0.0)) throw_invalid("chain: k1 must be positive");
  if (!(k2 < 0.0)) throw_invalid("chain: k2 must be negative");
  if (!(k1 + 4.0 * k2 > 0.0))
    throw_invalid("chain: stability requires k1 + 4*k2 > 0");
  if (n < 5) throw_invalid("chain: N must be at least 5");

  std::vector<double> f(static_cast<std::size_t>(n) + 1, 0.0);
  switch (spec.kind) {
    case ForceSpec::Kind::zero: break;
    case ForceSpec::Kind::point:
      if (spec.site < 0 || spec.site > n)
        throw_invalid("chain: point load site outside [0, N]");
      f[spec.site] = spec.magnitude;
      break;
    case ForceSpec::Kind::sine:
      for (int i = 0; i <= n; ++i)
        f[i] = std::sin(spec.mode * std::numbers::pi * i / n);
      break;
    case ForceSpec::Kind::poly:
      for (int i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) / n;
        double acc = 0.0;
        for (auto it = spec.coefficients.rbegin(); it != spec.coefficients.rend(); ++it)
          acc = acc * x + *it;
        f[i] = acc;
      }
      break;
    case ForceSpec::Kind::table:
      if (spec.table.size() != f.size())
        throw_invalid("chain: force table has " + std::to_string(spec.table.size()) +
                      " entries, expected N+1 = " + std::to_string(n + 1));
      f = spec.table;
      break;
  }
  for (auto& v : f) {
    v *= spec.scale;
    if (!std::isfinite(v)) throw_invalid("chain: non-finite force value");
  }
  // The load lives in U_0.
  f[0] = f[1] = f[n - 1] = f[n] = 0.0;
  return ChainModel(n, k1, k2, std::move(f));
}

double ChainModel::force(int i) const {
  if (i < 0 || i > n_) throw_invalid("chain: force index out of range");
  return force_[i];
}

ChainModel ChainModel::with_outer_boundary(const OuterBoundary& b) const {
  ChainModel copy = *this;
  copy.outer_ = b;
  return copy;
}

Decomposition Decomposition::decompose(const ChainModel& chain, int k, int l) {
  const int n = chain.n();
  if (!(0 < k && k < l && l < n))
    throw_invalid("decompose: requires 0 < K < L < N");
  if (k < 2) throw_invalid("decompose: requires K >= 2");
  if (l > n - 2) throw_invalid("decompose: requires L <= N - 2");
  if (l - k < 4)
    throw_invalid("decompose: requires an overlap of width L - K >= 4");
  // The continuum interior [K+1, N-2] is nonempty because K < L <= N-2.
  return Decomposition(n, k, l);
}

AssumptionReport validate_assumptions(const Decomposition& d, double p, double c) {
  if (!(p > 1.0)) throw_invalid("validate_assumptions: p must exceed 1");
  AssumptionReport r;
  r.size_limit = c * std::pow(static_cast<double>(d.n()), 1.0 / p);
  r.size_ok = d.l() <= r.size_limit;
  r.gamma_lower = 3.0 / d.l();
  r.overlap_ok = r.gamma_lower < d.gamma() && d.gamma() < 1.0;
  if (!r.size_ok) {
    std::ostringstream os;
    os << "atomistic size L = " << d.l() << " exceeds c*N^(1/p) = " << r.size_limit;
    r.warnings.push_back(os.str());
  }
  if (!r.overlap_ok) {
    std::ostringstream os;
    os << "overlap ratio gamma = " << d.gamma() << " outside (3/L, 1) = ("
       << r.gamma_lower << ", 1)";
    r.warnings.push_back(os.str());
  }
  return r;
}

std::string_view to_string(DomainTag tag) {
  switch (tag) {
    case DomainTag::global: return "global";
    case DomainTag::atomistic: return "atomistic";
    case DomainTag::continuum: return "continuum";
    case DomainTag::overlap: return "overlap";
  }
  return "unknown";
}

DisplacementField::DisplacementField(IndexRange range, DomainTag tag,
                                     std::vector<double> values)
    : range_(range), tag_(tag), values_(std::move(values)) {
  if (range.empty()) throw_invalid("field: empty index range");
  if (static_cast<int>(values_.size()) != range.size())
    throw_invalid("field: value count does not match index range");
}

DisplacementField DisplacementField::zeros(IndexRange range, DomainTag tag) {
  return DisplacementField(range, tag, std::vector<double>(range.size(), 0.0));
}

double DisplacementField::operator()(int i) const {
  if (!range_.contains(i))
    throw_invalid("field: index " + std::to_string(i) + " outside [" +
                  std::to_string(range_.lo) + ", " + std::to_string(range_.hi) + "]");
  return values_[i - range_.lo];
}

double& DisplacementField::operator()(int i) {
  if (!range_.contains(i))
    throw_invalid("field: index " + std::to_string(i) + " outside [" +
                  std::to_string(range_.lo) + ", " + std::to_string(range_.hi) + "]");
  return values_[i - range_.lo];
}

namespace {

void require_cover(const DisplacementField& u, IndexRange over) {
  if (!u.covers(over))
    throw_invalid("field does not cover [" + std::to_string(over.lo) + ", " +
                  std::to_string(over.hi) + "]");
}

}  // namespace

double dot(const DisplacementField& a, const DisplacementField& b, IndexRange over) {
  require_cover(a, over);
  require_cover(b, over);
  double s = 0.0;
  for (int i = over.lo; i <= over.hi; ++i) s += a(i) * b(i);
  return s;
}

double norm_squared(const DisplacementField& u, IndexRange over) {
  return dot(u, u, over);
}

double distance_squared(const DisplacementField& a, const DisplacementField& b,
                        IndexRange over) {
  require_cover(a, over);
  require_cover(b, over);
  double s = 0.0;
  for (int i = over.lo; i <= over.hi; ++i) {
    const double d = a(i) - b(i);
    s += d * d;
  }
  return s;
}

}  // namespace atc
