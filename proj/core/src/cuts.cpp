#include "spectral/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spectral {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double point_segment_distance(cplx z, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - a);
  const double t = std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + t * d));
}

bool segments_intersect(cplx a, cplx b, cplx c, cplx d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  const double eps = 1e-14 * (1.0 + std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}));
  return point_segment_distance(c, a, b) <= eps || point_segment_distance(d, a, b) <= eps ||
         point_segment_distance(a, c, d) <= eps || point_segment_distance(b, c, d) <= eps;
}

}  // namespace

CutSystem CutSystem::default_for(std::span<const cplx> betas) {
  if (betas.size() % 2 != 0) throw InvalidArgument("default_for: odd number of branch points");
  std::vector<int> idx(betas.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    const cplx x = betas[static_cast<std::size_t>(a)], y = betas[static_cast<std::size_t>(b)];
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  CutSystem cs;
  for (std::size_t k = 0; k + 1 < idx.size(); k += 2) cs.pairs.emplace_back(idx[k], idx[k + 1]);
  return cs;
}

void CutSystem::validate(std::size_t n) const {
  if (pairs.size() * 2 != n) throw InvalidArgument("CutSystem: pair count does not match branch points");
  if (!via.empty() && via.size() != pairs.size())
    throw InvalidArgument("CutSystem: via must be empty or have one entry per cut");
  std::vector<int> seen(n, 0);
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n || a == b)
      throw InvalidArgument("CutSystem: index out of range");
    ++seen[static_cast<std::size_t>(a)];
    ++seen[static_cast<std::size_t>(b)];
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
    throw InvalidArgument("CutSystem: pairs are not a perfect matching");
}

CutGeometry::CutGeometry(CVec betas, CutSystem cuts, double on_cut_tol)
    : betas_(std::move(betas)), cuts_(std::move(cuts)), tol_(on_cut_tol) {
  cuts_.validate(betas_.size());
  for (int j = 0; j < q(); ++j) {
    CVec v{start(j)};
    if (!cuts_.via.empty()) {
      const auto& mid = cuts_.via[static_cast<std::size_t>(j)];
      v.insert(v.end(), mid.begin(), mid.end());
    }
    v.push_back(end(j));
    verts_.push_back(std::move(v));
  }
  // Cuts must be pairwise disjoint; consecutive segments of one polyline share a vertex only.
  for (int j = 0; j < q(); ++j)
    for (int k = j + 1; k < q(); ++k) {
      const CVec& a = vertices(j);
      const CVec& b = vertices(k);
      for (std::size_t s = 0; s + 1 < a.size(); ++s)
        for (std::size_t t = 0; t + 1 < b.size(); ++t)
          if (segments_intersect(a[s], a[s + 1], b[t], b[t + 1]))
            throw CutConfigurationError("cuts " + std::to_string(j) + " and " + std::to_string(k) +
                                        " intersect");
    }
}

cplx CutGeometry::start(int j) const {
  return betas_[static_cast<std::size_t>(cuts_.pairs[static_cast<std::size_t>(j)].first)];
}

cplx CutGeometry::end(int j) const {
  return betas_[static_cast<std::size_t>(cuts_.pairs[static_cast<std::size_t>(j)].second)];
}

CVec CutGeometry::ordered_betas() const {
  CVec out;
  for (int j = 0; j < q(); ++j) {
    out.push_back(start(j));
    out.push_back(end(j));
  }
  return out;
}

cplx CutGeometry::factor(int j, cplx z) const {
  const CVec& v = vertices(j);
  if (v.size() == 2) {
    const cplx m = 0.5 * (v[0] + v[1]);
    const cplx d = 0.5 * (v[1] - v[0]);
    const cplx w = d / (z - m);
    return (z - m) * std::sqrt(1.0 - w * w);
  }
  cplx sum{};
  for (std::size_t s = 0; s + 1 < v.size(); ++s) sum += std::log((z - v[s]) / (z - v[s + 1]));
  return (z - v.back()) * std::exp(0.5 * sum);
}

cplx CutGeometry::y0(cplx z) const {
  int which = -1;
  if (distance_to_cuts(z, &which) <= tol_ * (1.0 + std::abs(z)))
    throw OnCut("y0 evaluated on a cut", which);
  return y0_unchecked(z);
}

cplx CutGeometry::y0_unchecked(cplx z) const {
  cplx acc = 1.0;
  for (int j = 0; j < q(); ++j) acc *= factor(j, z);
  return acc;
}

cplx CutGeometry::others(int j, cplx z) const {
  cplx acc = 1.0;
  for (int k = 0; k < q(); ++k)
    if (k != j) acc *= factor(k, z);
  return acc;
}

cplx CutGeometry::y0_left_param(int j, std::size_t seg, double t, double c) const {
  const CVec& v = vertices(j);
  if (seg + 1 >= v.size()) throw InvalidArgument("y0_left_param: segment index out of range");
  const cplx d = v[seg + 1] - v[seg];
  const cplx z = (t <= 0.5) ? v[seg] + t * d : v[seg + 1] - c * d;
  if (v.size() == 2) return kI * (0.5 * d) * (2.0 * std::sqrt(t * c)) * others(j, z);
  auto diff = [&](std::size_t k) -> cplx {
    if (k == seg) return t * d;
    if (k == seg + 1) return -c * d;
    return z - v[k];
  };
  cplx sum{};
  for (std::size_t s = 0; s + 1 < v.size(); ++s)
    sum += (s == seg) ? cplx(std::log(t / c), -kPi) : std::log(diff(s) / diff(s + 1));
  return diff(v.size() - 1) * std::exp(0.5 * sum) * others(j, z);
}

double CutGeometry::radius() const {
  double r = 0.0;
  for (const auto& v : verts_)
    for (cplx x : v) r = std::max(r, std::abs(x));
  return r;
}

cplx CutGeometry::y0_left(int j, cplx z) const {
  const CVec& v = vertices(j);
  cplx fj;
  if (v.size() == 2) {
    const cplx m = 0.5 * (v[0] + v[1]);
    const cplx d = 0.5 * (v[1] - v[0]);
    const cplx tau = (z - m) / d;
    // Interior point: tau is real in (-1, 1); drop any rounding in the imaginary part.
    const double t = std::clamp(tau.real(), -1.0, 1.0);
    fj = kI * d * std::sqrt(1.0 - t * t);
  } else {
    // Find the segment carrying z; it contributes log|r| - i pi from the left side.
    std::size_t seg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s + 1 < v.size(); ++s) {
      const double dist = point_segment_distance(z, v[s], v[s + 1]);
      if (dist < best) {
        best = dist;
        seg = s;
      }
    }
    cplx sum{};
    for (std::size_t s = 0; s + 1 < v.size(); ++s) {
      const cplx r = (z - v[s]) / (z - v[s + 1]);
      sum += (s == seg) ? cplx(std::log(std::abs(r)), -kPi) : std::log(r);
    }
    fj = (z - v.back()) * std::exp(0.5 * sum);
  }
  return fj * others(j, z);
}

double CutGeometry::distance_to_cuts(cplx z, int* which) const {
  double best = std::numeric_limits<double>::infinity();
  int arg = -1;
  for (int j = 0; j < q(); ++j) {
    const CVec& v = vertices(j);
    for (std::size_t s = 0; s + 1 < v.size(); ++s) {
      const double d = point_segment_distance(z, v[s], v[s + 1]);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
  }
  if (which) *which = arg;
  return best;
}

cplx CutGeometry::reference_direction() const {
  if (q() == 0) return 1.0;
  cplx d = (q() == 1) ? end(0) - start(0) : end(q() - 1) - start(0);
  if (std::abs(d) == 0.0) throw CutConfigurationError("degenerate reference direction");
  return d / std::abs(d);
}

void CutGeometry::check_monotone() const {
  const cplx e = reference_direction();
  // The positive real ray from any point of the path must stay clear of the part behind it.
  if (e.real() < 0.0) throw CutConfigurationError("reference direction points into the left half plane");
  auto positive = [&](cplx from, cplx to) {
    const double len = std::abs(to - from);
    return len > 0.0 && ((to - from) * std::conj(e)).real() > 1e-12 * len;
  };
  for (int j = 0; j < q(); ++j) {
    const CVec& v = vertices(j);
    for (std::size_t s = 0; s + 1 < v.size(); ++s)
      if (!positive(v[s], v[s + 1]))
        throw CutConfigurationError("cut " + std::to_string(j) + " is not monotone along the reference direction");
    if (j + 1 < q() && !positive(end(j), start(j + 1)))
      throw CutConfigurationError("connector after cut " + std::to_string(j) + " is not monotone");
  }
}

}  // namespace spectral
