#include "oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

double round_half_away(double x, int decimals) {
    double scale = 1.0;
    for (int d = 0; d < decimals; ++d) scale *= 10.0;
    const double mag = std::floor(std::fabs(x) * scale + 0.5) / scale;
    if (mag == 0.0) return 0.0;
    return x < 0 ? -mag : mag;
}

namespace {

double median_of(std::vector<double> v) {
    // insertion sort, on purpose
    for (std::size_t i = 1; i < v.size(); ++i)
        for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) std::swap(v[j - 1], v[j]);
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double sort_key(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return -9999.0;
    return *v;
}

}  // namespace

Signals signals(const std::vector<TickerRecord>& tk, int ssm, int open_ssm, int close_ssm, bool median_kind) {
    const std::size_t n = tk.size();
    double t = double(ssm - open_ssm) / double(close_ssm - open_ssm);
    if (t < 0) t = 0;
    if (t > 1) t = 1;

    std::vector<std::optional<double>> ret(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double tt = tk[i].close == 0 ? 1.0 : t;
        const double x = (1 - tt) * tk[i].close + tt * (tk[i].high + tk[i].low) / 2;
        const double y = tk[i].last / x;
        if (std::isfinite(y) && y > 0) ret[i] = tk[i].weight * std::log(y);
    }

    Signals out;
    out.unrounded.resize(n);
    out.signal.resize(n);
    out.delta.resize(n);
    std::vector<std::optional<double>> res(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!ret[i] || tk[i].industry.empty()) continue;
        double sum = 0;
        int count = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (tk[j].industry == tk[i].industry && ret[j]) {
                sum += *ret[j];
                ++count;
            }
        }
        res[i] = *ret[i] - sum / count;
    }

    std::vector<double> r;
    for (auto& v : res)
        if (v) r.push_back(*v);
    if (r.size() < 2) throw std::domain_error("too few residuals");
    double sigma;
    if (median_kind) {
        const double m = median_of(r);
        std::vector<double> d;
        for (double v : r) d.push_back(std::fabs(v - m));
        sigma = 1.4826 * median_of(d);
    } else {
        double mean = 0;
        for (double v : r) mean += v;
        mean /= double(r.size());
        sigma = 0;
        for (double v : r) sigma += std::fabs(v - mean);
        sigma /= double(r.size());
    }
    if (!(sigma > 0)) throw std::domain_error("zero scale");
    out.sigma = sigma;

    for (std::size_t i = 0; i < n; ++i) {
        if (!res[i]) continue;
        out.unrounded[i] = *res[i] / sigma;
        out.signal[i] = round_half_away(*out.unrounded[i], 2);
        if (tk[i].prev_signal) out.delta[i] = round_half_away(std::fabs(*out.signal[i] - *tk[i].prev_signal), 4);
    }
    return out;
}

std::vector<int> rank_quant(const std::vector<double>& values, const std::vector<std::string>& symbols) {
    const std::size_t n = values.size();
    std::vector<int> rank(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = sort_key(values[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double b = sort_key(values[j]);
            bool before;
            if (b != a) before = b < a;
            else if (a == 0.0) before = symbols[j] < symbols[i] || (symbols[j] == symbols[i] && j < i);
            else before = j < i;
            rank[i] += before;
        }
    }
    return rank;
}

std::vector<int> rank_signal(const std::vector<double>& caps, const std::vector<std::optional<double>>& signals) {
    const std::size_t n = caps.size();
    std::vector<int> rank(n, 0);
    auto mag = [&](std::size_t i) {
        return signals[i] && std::isfinite(*signals[i]) ? std::fabs(*signals[i]) : -9999.0;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double mi = mag(i), mj = mag(j);
            const double ci = sort_key(caps[i]), cj = sort_key(caps[j]);
            bool before;
            if (mj != mi) before = mj < mi;
            else if (cj != ci) before = cj < ci;
            else before = j < i;
            rank[i] += before;
        }
    }
    return rank;
}

std::vector<int> rank_delta(const std::vector<std::optional<double>>& deltas) {
    const std::size_t n = deltas.size();
    std::vector<int> rank(n, static_cast<int>(n) - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double a = sort_key(deltas[i]), b = sort_key(deltas[j]);
            if (b < a || (b == a && j < i)) --rank[i];
        }
    }
    return rank;
}

double scramble_multiplier(int index0) {
    const double k = index0 + 2;
    double m = round_half_away(std::sin(std::sqrt(3.0) * k + std::sqrt(7.0) * std::cos(std::sqrt(11.0) * k)), 2);
    if (m == 0) m = round_half_away(std::cos(std::sqrt(3.0) * k + std::sqrt(7.0) * std::sin(std::sqrt(11.0) * k)), 2);
    return m;
}

int tier_of(int i, int n, int p) {
    for (int k = 0; k < p; ++k)
        if (i <= (n * (k + 1)) / p - 1) return k;
    return p - 1;
}

}  // namespace oracle
