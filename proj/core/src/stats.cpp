#include "mcq/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace mcq {

namespace {

constexpr double kT975[] = {
    0,     12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262,
    2.228, 2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093,
    2.086, 2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045,
    2.042};

constexpr double kT99[] = {
    0,     31.821, 6.965, 4.541, 3.747, 3.365, 3.143, 2.998, 2.896, 2.821,
    2.764, 2.718,  2.681, 2.650, 2.624, 2.602, 2.583, 2.567, 2.552, 2.539,
    2.528, 2.518,  2.508, 2.500, 2.492, 2.485, 2.479, 2.473, 2.467, 2.462,
    2.457};

}  // namespace

double student_t_975(int df) {
  if (df < 1) throw std::invalid_argument("student_t_975: df must be >= 1");
  if (df <= 30) return kT975[df];
  if (df <= 60) return 2.000;
  return 1.960;
}

double student_t_99(int df) {
  if (df < 1) throw std::invalid_argument("student_t_99: df must be >= 1");
  if (df <= 30) return kT99[df];
  if (df <= 60) return 2.390;
  return 2.326;
}

BatchMeansResult batch_means(std::span<const double> samples,
                             int batch_count) {
  BatchMeansResult out;
  const std::size_t n = samples.size();
  if (n == 0) return out;

  double total = 0;
  for (double s : samples) total += s;
  out.mean = total / static_cast<double>(n);

  const int batches = std::min<std::size_t>(batch_count, n);
  if (batches < 2) {
    out.batch_count = batches;
    return out;
  }
  const std::size_t per = n / batches;  // trailing remainder joins last batch
  std::vector<double> means(batches, 0.0);
  for (int b = 0; b < batches; ++b) {
    const std::size_t lo = b * per;
    const std::size_t hi = (b == batches - 1) ? n : lo + per;
    double sum = 0;
    for (std::size_t i = lo; i < hi; ++i) sum += samples[i];
    means[b] = sum / static_cast<double>(hi - lo);
  }
  double mb = 0;
  for (double m : means) mb += m;
  mb /= batches;
  double var = 0;
  for (double m : means) var += (m - mb) * (m - mb);
  var /= (batches - 1);

  out.variance = var;
  out.batch_count = batches;
  out.ci95_half_width =
      student_t_975(batches - 1) * std::sqrt(var / batches);
  return out;
}

bool growth_trend(std::span<const double> window_means) {
  const int n = static_cast<int>(window_means.size());
  if (n < 4) return false;

  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    sx += i;
    sy += window_means[i];
  }
  const double xbar = sx / n, ybar = sy / n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (i - xbar) * (i - xbar);
    sxy += (i - xbar) * (window_means[i] - ybar);
  }
  const double slope = sxy / sxx;
  if (!(slope > 0)) return false;

  double sse = 0;
  for (int i = 0; i < n; ++i) {
    const double fit = ybar + slope * (i - xbar);
    sse += (window_means[i] - fit) * (window_means[i] - fit);
  }
  const double se2 = sse / (n - 2) / sxx;
  if (se2 <= 0) return true;  // perfect positive line
  const double t = slope / std::sqrt(se2);
  if (t <= student_t_99(n - 2)) return false;

  // guard against autocorrelated wander around a stationary level
  const int q = n / 4;
  double first = 0, last = 0;
  for (int i = 0; i < q; ++i) first += window_means[i];
  for (int i = n - q; i < n; ++i) last += window_means[i];
  first /= q;
  last /= q;
  return last > 1.5 * first + 1e-9;
}

}  // namespace mcq
