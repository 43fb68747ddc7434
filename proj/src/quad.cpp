#include "holab/quad.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "holab/error.hpp"

namespace holab {

namespace {

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

constexpr int kChunk = 256;

void run_workers(int jobs, int workers, const std::function<void(int)>& job) {
  if (workers <= 1 || jobs <= 1) {
    for (int c = 0; c < jobs; ++c) job(c);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (int c = next.fetch_add(1); c < jobs; c = next.fetch_add(1)) {
      try {
        job(c);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nw = std::min(workers, jobs);
  pool.reserve(static_cast<std::size_t>(nw));
  for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

// Compensated sum of item(0..total-1) in fixed chunks combined in order, so
// the result does not depend on the worker count.
double chunked_sum(int total, int workers,
                   const std::function<double(int)>& item) {
  const int chunks = (total + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
  run_workers(chunks, workers, [&](int c) {
    Kahan acc;
    const int end = std::min(total, (c + 1) * kChunk);
    for (int i = c * kChunk; i < end; ++i) acc.add(item(i));
    partial[static_cast<std::size_t>(c)] = acc.sum;
  });
  Kahan acc;
  for (double p : partial) acc.add(p);
  return acc.sum;
}

void fill_slots(int total, int workers, const std::function<void(int)>& fill) {
  const int chunks = (total + kChunk - 1) / kChunk;
  run_workers(chunks, workers, [&](int c) {
    const int end = std::min(total, (c + 1) * kChunk);
    for (int i = c * kChunk; i < end; ++i) fill(i);
  });
}

}  // namespace

double integrate_1form(const PathMesh& m, const Form1& a) {
  const Group& g = m.group;
  Kahan acc;
  for (int i = 0; i < m.intervals(); ++i) {
    const Mat d = g.log(g.inverse(m.at(i)) * m.at(i + 1));
    const Mat mid = m.at(i) * g.exp(0.5 * d);
    acc.add(a(mid, d));
  }
  return acc.sum;
}

double integrate_2form(const SquareMesh& m, const Form2& b, int workers) {
  const Group& g = m.group;
  const int n1 = m.n1;
  const int n2 = m.n2;
  std::vector<Mat> lt(static_cast<std::size_t>(n1 * (n2 + 1)));
  std::vector<Mat> ls(static_cast<std::size_t>((n1 + 1) * n2));
  fill_slots(n1 * (n2 + 1), workers, [&](int idx) {
    const int i = idx / (n2 + 1);
    const int j = idx % (n2 + 1);
    lt[static_cast<std::size_t>(idx)] =
        g.log(g.inverse(m.at(i, j)) * m.at(i + 1, j));
  });
  fill_slots((n1 + 1) * n2, workers, [&](int idx) {
    const int i = idx / n2;
    const int j = idx % n2;
    ls[static_cast<std::size_t>(idx)] =
        g.log(g.inverse(m.at(i, j)) * m.at(i, j + 1));
  });
  auto lt_at = [&](int i, int j) -> const Mat& {
    return lt[static_cast<std::size_t>(i * (n2 + 1) + j)];
  };
  auto ls_at = [&](int i, int j) -> const Mat& {
    return ls[static_cast<std::size_t>(i * n2 + j)];
  };
  return chunked_sum(n1 * n2, workers, [&](int idx) {
    const int i = idx / n2;
    const int j = idx % n2;
    const double low = b(m.at(i, j), lt_at(i, j), ls_at(i, j));
    const double high = b(m.at(i + 1, j + 1), lt_at(i, j + 1), ls_at(i + 1, j));
    return 0.5 * (low + high);
  });
}

double integrate_3form(const CubeMesh& m, const Form3& c, int workers) {
  const Group& g = m.group;
  const int n1 = m.n1;
  const int n2 = m.n2;
  const int n3 = m.n3;
  const int s2 = n2 + 1;
  const int s3 = n3 + 1;
  std::vector<Mat> l1(static_cast<std::size_t>(n1 * s2 * s3));
  std::vector<Mat> l2(static_cast<std::size_t>((n1 + 1) * n2 * s3));
  std::vector<Mat> l3(static_cast<std::size_t>((n1 + 1) * s2 * n3));
  fill_slots(n1 * s2 * s3, workers, [&](int idx) {
    const int k = idx % s3;
    const int j = (idx / s3) % s2;
    const int i = idx / (s2 * s3);
    l1[static_cast<std::size_t>(idx)] =
        g.log(g.inverse(m.at(i, j, k)) * m.at(i + 1, j, k));
  });
  fill_slots((n1 + 1) * n2 * s3, workers, [&](int idx) {
    const int k = idx % s3;
    const int j = (idx / s3) % n2;
    const int i = idx / (n2 * s3);
    l2[static_cast<std::size_t>(idx)] =
        g.log(g.inverse(m.at(i, j, k)) * m.at(i, j + 1, k));
  });
  fill_slots((n1 + 1) * s2 * n3, workers, [&](int idx) {
    const int k = idx % n3;
    const int j = (idx / n3) % s2;
    const int i = idx / (s2 * n3);
    l3[static_cast<std::size_t>(idx)] =
        g.log(g.inverse(m.at(i, j, k)) * m.at(i, j, k + 1));
  });
  auto l1_at = [&](int i, int j, int k) -> const Mat& {
    return l1[static_cast<std::size_t>((i * s2 + j) * s3 + k)];
  };
  auto l2_at = [&](int i, int j, int k) -> const Mat& {
    return l2[static_cast<std::size_t>((i * n2 + j) * s3 + k)];
  };
  auto l3_at = [&](int i, int j, int k) -> const Mat& {
    return l3[static_cast<std::size_t>((i * s2 + j) * n3 + k)];
  };
  return chunked_sum(n1 * n2 * n3, workers, [&](int idx) {
    const int k = idx % n3;
    const int j = (idx / n3) % n2;
    const int i = idx / (n2 * n3);
    double s = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (int d = 0; d < 2; ++d) {
          s += c(m.at(i + a, j + b, k + d), l1_at(i, j + b, k + d),
                 l2_at(i + a, j, k + d), l3_at(i + a, j + b, k));
        }
      }
    }
    return 0.125 * s;
  });
}

Mat eta_theta(const PathMesh& u) {
  const Group& g = u.group;
  Mat acc = Mat::Zero(g.matrix_size(), g.matrix_size());
  for (int i = 0; i < u.intervals(); ++i) {
    const Mat d = g.log(g.inverse(u.at(i)) * u.at(i + 1));
    const Mat mid = u.at(i) * g.exp(0.5 * d);
    acc += g.theta_flat(mid, d);
  }
  return acc;
}

double delta_equivariant(const Group& arena, const Form1& a,
                         const Mat& x_block, const Mat& g) {
  return -a(g, conj_field(arena, g, x_block));
}

double delta_equivariant(const Group& arena, const Form2& a,
                         const Mat& x_block, const Mat& g, const Mat& v) {
  return -a(g, conj_field(arena, g, x_block), v);
}

double delta_equivariant(const Group& arena, const Form3& a,
                         const Mat& x_block, const Mat& g, const Mat& v,
                         const Mat& w) {
  return -a(g, conj_field(arena, g, x_block), v, w);
}

Richardson richardson(const std::array<double, 3>& v,
                      const std::array<int, 3>& n) {
  if (n[0] < 1 || n[0] >= n[1] || n[1] >= n[2]) {
    throw Error(ErrorKind::usage,
                fmt::format("richardson needs increasing resolutions, got "
                            "{}, {}, {}",
                            n[0], n[1], n[2]));
  }
  Richardson r;
  const double d1 = v[1] - v[0];
  const double d2 = v[2] - v[1];
  const double scale =
      std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2]), 1.0});
  if (std::abs(d1) <= 1e-14 * scale && std::abs(d2) <= 1e-14 * scale) {
    r.value = v[2];
    r.exact = true;
    return r;
  }
  r.value = v[2];
  r.error = std::abs(d2);
  if (d2 == 0.0 || d1 / d2 <= 1.0) return r;
  const double h1 = 1.0 / n[0];
  const double h2 = 1.0 / n[1];
  const double h3 = 1.0 / n[2];
  const double target = d1 / d2;
  auto excess = [&](double p) {
    return (std::pow(h1, p) - std::pow(h2, p)) /
               (std::pow(h2, p) - std::pow(h3, p)) -
           target;
  };
  double lo = 0.05;
  double hi = 10.0;
  if (excess(lo) > 0.0 || excess(hi) < 0.0) return r;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  const double p = 0.5 * (lo + hi);
  const double coeff = d2 / (std::pow(h3, p) - std::pow(h2, p));
  const double corr = coeff * std::pow(h3, p);
  r.value = v[2] - corr;
  r.error = std::abs(corr);
  r.order = p;
  r.order_ok = true;
  return r;
}

Snap integer_snap(double x, double tol) {
  Snap s;
  s.value = std::llround(x);
  s.defect = std::abs(x - static_cast<double>(s.value));
  s.ok = s.defect <= tol;
  return s;
}

}  // namespace holab
