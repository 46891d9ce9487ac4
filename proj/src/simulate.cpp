#include "ccrlink/simulate.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "ccrlink/errors.hpp"

namespace ccrlink::simulate {

namespace {

constexpr std::uint64_t kChunk = 1u << 16;
// Stream-id namespaces keep the proposed-link and baseline draws independent
// under a shared seed.
constexpr std::uint64_t kConventionalStreamBit = 1ull << 63;

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

struct ChunkAccum {
    KahanSum s1, s2, s4, s8;
    std::vector<std::uint64_t> below;
};

std::pair<double, double> sample_kibble_pair(Philox& rng, double shape, double rho) {
    const double gx = rand_gamma(rng, shape);
    double gy;
    if (rho == 0.0) {
        gy = rand_gamma(rng, shape);
    } else {
        const std::uint64_t n = rand_poisson(rng, rho * gx / (1.0 - rho));
        gy = rand_gamma(rng, shape + static_cast<double>(n)) * (1.0 - rho);
    }
    return {gx / shape, gy / shape};
}

int resolve_workers(int workers) {
    if (workers < 0)
        throw config_error("worker count must be >= 0");
    if (workers == 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        return hc == 0 ? 1 : static_cast<int>(hc);
    }
    return workers;
}

// Runs `body(sample_index, rng, accum)` over all samples, chunked so the
// reduction order is independent of the worker count.
template <typename Body>
std::vector<ChunkAccum> run_chunked(std::uint64_t samples, std::uint64_t seed,
                                    std::uint64_t stream_base, int workers,
                                    std::size_t n_thresholds, Body&& body) {
    const std::uint64_t n_chunks = (samples + kChunk - 1) / kChunk;
    std::vector<ChunkAccum> chunks(n_chunks);
    for (auto& c : chunks)
        c.below.assign(n_thresholds, 0);

    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::uint64_t ci = next.fetch_add(1);
            if (ci >= n_chunks) return;
            ChunkAccum& acc = chunks[ci];
            const std::uint64_t begin = ci * kChunk;
            const std::uint64_t end = std::min(begin + kChunk, samples);
            for (std::uint64_t i = begin; i < end; ++i) {
                Philox rng(seed, stream_base | i);
                body(rng, acc);
            }
        }
    };

    const int nw = std::min<std::uint64_t>(resolve_workers(workers), n_chunks);
    if (nw <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (int t = 0; t < nw; ++t)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();
    }
    return chunks;
}

void accumulate_value(ChunkAccum& acc, double value, const std::vector<double>& thresholds) {
    const double v2 = value * value;
    const double v4 = v2 * v2;
    acc.s1.add(value);
    acc.s2.add(v2);
    acc.s4.add(v4);
    acc.s8.add(v4 * v4);
    for (std::size_t t = 0; t < thresholds.size(); ++t)
        if (value < thresholds[t]) ++acc.below[t];
}

struct Reduced {
    double e1, e2, e4, e8;
    std::vector<double> p, p_se;
};

Reduced reduce(const std::vector<ChunkAccum>& chunks, std::uint64_t n,
               std::size_t n_thresholds) {
    double s1 = 0.0, s2 = 0.0, s4 = 0.0, s8 = 0.0;
    std::vector<std::uint64_t> below(n_thresholds, 0);
    for (const auto& c : chunks) { // fixed chunk order
        s1 += c.s1.sum;
        s2 += c.s2.sum;
        s4 += c.s4.sum;
        s8 += c.s8.sum;
        for (std::size_t t = 0; t < n_thresholds; ++t)
            below[t] += c.below[t];
    }
    const double dn = static_cast<double>(n);
    Reduced r;
    r.e1 = s1 / dn;
    r.e2 = s2 / dn;
    r.e4 = s4 / dn;
    r.e8 = s8 / dn;
    r.p.resize(n_thresholds);
    r.p_se.resize(n_thresholds);
    for (std::size_t t = 0; t < n_thresholds; ++t) {
        const double p = static_cast<double>(below[t]) / dn;
        r.p[t] = p;
        r.p_se[t] = std::sqrt(std::max(p * (1.0 - p), 0.0) / dn);
    }
    return r;
}

double moment_se(double e_k, double e_2k, double n) {
    return std::sqrt(std::max(e_2k - e_k * e_k, 0.0) / n);
}

} // namespace

std::pair<double, double> sample_correlated_gg(const channel::TurbulenceParams& params,
                                               Philox& rng) {
    const auto [xa, ya] = sample_kibble_pair(rng, params.alpha1, params.rho_alpha);
    const auto [xb, yb] = sample_kibble_pair(rng, params.beta1, params.rho_beta);
    return {xa * xb, ya * yb};
}

std::vector<double> sample_pointing(const geometry::CCRLayout& layout, double sigma_s,
                                    double w, double a0, Philox& rng) {
    double dx = 0.0, dy = 0.0;
    if (sigma_s > 0.0) {
        dx = sigma_s * rng.next_normal();
        dy = sigma_s * rng.next_normal();
    }
    std::vector<double> z(layout.size());
    for (int i = 0; i < layout.size(); ++i) {
        const auto& p = layout.positions()[i];
        const double rx = p.x + dx;
        const double ry = p.y + dy;
        z[i] = a0 * std::exp(-2.0 * (rx * rx + ry * ry) / (w * w));
    }
    return z;
}

SimSummary simulate_outage(const SimulationPlan& plan) {
    if (plan.samples < 1)
        throw config_error("simulation needs at least one sample");
    plan.scenario.turbulence.validate();
    const auto& sc = plan.scenario;
    const int m = sc.layout.size();
    const double inv_w2 = 1.0 / (sc.w * sc.w);

    auto body = [&](Philox& rng, ChunkAccum& acc) {
        double dx = 0.0, dy = 0.0;
        if (sc.sigma_s > 0.0) {
            dx = sc.sigma_s * rng.next_normal();
            dy = sc.sigma_s * rng.next_normal();
        }
        double s_val = 0.0;
        for (int i = 0; i < m; ++i) {
            const auto [x, y] = sample_correlated_gg(sc.turbulence, rng);
            const auto& p = sc.layout.positions()[i];
            const double rx = p.x + dx;
            const double ry = p.y + dy;
            const double z = sc.a0 * std::exp(-2.0 * (rx * rx + ry * ry) * inv_w2);
            s_val += x * y * z;
        }
        accumulate_value(acc, s_val, plan.thresholds);
    };

    const auto chunks = run_chunked(plan.samples, plan.seed, 0, plan.workers,
                                    plan.thresholds.size(), body);
    const auto r = reduce(chunks, plan.samples, plan.thresholds.size());

    SimSummary out;
    out.samples = plan.samples;
    const double dn = static_cast<double>(plan.samples);
    out.m1 = {r.e1, moment_se(r.e1, r.e2, dn)};
    out.m2 = {r.e2, moment_se(r.e2, r.e4, dn)};
    out.m4 = {r.e4, moment_se(r.e4, r.e8, dn)};
    out.outage = r.p;
    out.outage_se = r.p_se;
    return out;
}

ConventionalSummary conventional_outage(const ConventionalPlan& plan) {
    if (plan.samples < 1)
        throw config_error("simulation needs at least one sample");
    if (!(plan.baseline.p_t > 0.0))
        throw config_error("conventional baseline requires a transmit power > 0");
    if (!(plan.baseline.w > 0.0) || !(plan.baseline.a0 > 0.0))
        throw config_error("conventional baseline requires beamwidth and peak gain > 0");
    plan.turbulence.validate();
    const auto& bl = plan.baseline;

    // P_R = h * P_T with h = h_a h_l h_p g_rx; thresholds transfer to h.
    std::vector<double> h_thresholds(plan.thresholds.size());
    for (std::size_t i = 0; i < plan.thresholds.size(); ++i)
        h_thresholds[i] = plan.thresholds[i] / bl.p_t;

    const double inv_w2 = 1.0 / (bl.w * bl.w);
    auto body = [&](Philox& rng, ChunkAccum& acc) {
        double r2 = 0.0;
        if (bl.sigma_s > 0.0) {
            const double dx = bl.sigma_s * rng.next_normal();
            const double dy = bl.sigma_s * rng.next_normal();
            r2 = dx * dx + dy * dy;
        }
        const double h_a = rand_gamma(rng, plan.turbulence.alpha1) / plan.turbulence.alpha1 *
                           rand_gamma(rng, plan.turbulence.beta1) / plan.turbulence.beta1;
        const double h_p = bl.a0 * std::exp(-2.0 * r2 * inv_w2);
        accumulate_value(acc, h_a * bl.h_ell * h_p * bl.g_rx, h_thresholds);
    };

    const auto chunks = run_chunked(plan.samples, plan.seed, kConventionalStreamBit,
                                    plan.workers, h_thresholds.size(), body);
    const auto r = reduce(chunks, plan.samples, h_thresholds.size());

    ConventionalSummary out;
    out.samples = plan.samples;
    out.outage = r.p;
    out.outage_se = r.p_se;
    return out;
}

} // namespace ccrlink::simulate
