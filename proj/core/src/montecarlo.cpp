#include "wishart/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <mutex>
#include <sstream>
#include <thread>

#include "wishart/checkpoint.hpp"

namespace wishart {

void McConfig::validate() const {
    if (replicas < 2) throw ContractViolation("McConfig: replicas must be >= 2");
    if (batch_size < 1) throw ContractViolation("McConfig: batch_size must be >= 1");
    if (batch_size > replicas) throw ContractViolation("McConfig: batch_size > replicas");
    if (checkpoint_every < 1) throw ContractViolation("McConfig: checkpoint_every must be >= 1");
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char ch : bytes) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

void append_num(std::string& s, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    s += buf;
}

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace

std::uint64_t experiment_hash(const ExperimentGeometry& geom, const McConfig& mc) {
    std::string s;
    s.reserve(256);
    s += "L=" + std::to_string(geom.L) + ";";
    s += "beta=" + std::to_string(beta_of(geom.process.field)) + ";";
    s += "family=" + std::to_string(static_cast<int>(geom.process.family)) + ";";
    append_num(s, geom.process.rate);
    s += "times:";
    for (double t : geom.grid.times()) append_num(s, t);
    s += "obs:";
    for (const auto& o : geom.observables) {
        append_num(s, o.row_offset);
        append_num(s, o.col_offset);
        append_num(s, o.mu);
        append_num(s, o.nu);
        s += std::to_string(o.power) + ";" + std::to_string(o.time_index) + ";";
    }
    s += "seed=" + std::to_string(mc.seed) + ";";
    s += "replicas=" + std::to_string(mc.replicas) + ";";
    s += "batch=" + std::to_string(mc.batch_size) + ";";
    return fnv1a64(s);
}

McEstimate finalize_batches(const BatchSet& set, std::uint64_t batch_size) {
    const std::size_t k = set.dim();
    const std::uint64_t R = set.total_count();
    if (R < 2) throw ContractViolation("finalize_batches: need at least 2 replicas");
    const double n = static_cast<double>(R);

    // Global sums, reduced in ascending batch order with compensation.
    std::vector<KahanSum> S1(k), S3(k), S4(k), S2(k * (k + 1) / 2);
    for (const auto& [idx, b] : set.batches()) {
        for (std::size_t i = 0; i < k; ++i) {
            S1[i].add(b.s1[i]);
            S3[i].add(b.s3[i]);
            S4[i].add(b.s4[i]);
        }
        for (std::size_t t = 0; t < S2.size(); ++t) S2[t].add(b.s2[t]);
    }

    McEstimate est;
    est.replicas_used = R;
    est.batch_size = batch_size;
    est.mean.resize(k);
    est.cov.resize(k, k);
    est.se_cov = Eigen::MatrixXd::Zero(k, k);
    est.skewness.resize(k);
    est.excess_kurtosis.resize(k);

    std::vector<double> delta(k);  // mean of the anchored values
    for (std::size_t i = 0; i < k; ++i) {
        delta[i] = S1[i].value() / n;
        est.mean(i) = set.anchor()[i] + delta[i];
    }

    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double cov =
                (S2[lower_index(i, j)].value() - S1[i].value() * S1[j].value() / n) / (n - 1.0);
            est.cov(i, j) = cov;
            est.cov(j, i) = cov;
        }

    for (std::size_t i = 0; i < k; ++i) {
        const double d = delta[i];
        const double m2 = S2[lower_index(i, i)].value() / n - d * d;
        const double m3 = S3[i].value() / n - 3.0 * d * S2[lower_index(i, i)].value() / n +
                          2.0 * d * d * d;
        const double m4 = S4[i].value() / n - 4.0 * d * S3[i].value() / n +
                          6.0 * d * d * S2[lower_index(i, i)].value() / n - 3.0 * d * d * d * d;
        if (m2 > 0.0) {
            est.skewness(i) = m3 / std::pow(m2, 1.5);
            est.excess_kurtosis(i) = m4 / (m2 * m2) - 3.0;
        } else {
            est.skewness(i) = 0.0;
            est.excess_kurtosis(i) = 0.0;
        }
    }

    // Batch-means SE over full-size batches: H_b is the batch mean of
    // (x_i - xbar_i)(x_j - xbar_j) assembled from the batch power sums.
    std::vector<const BatchPartial*> full;
    for (const auto& [idx, b] : set.batches())
        if (b.count == batch_size) full.push_back(&b);
    const double nb = static_cast<double>(full.size());
    if (full.size() >= 2) {
        const double B = static_cast<double>(batch_size);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                KahanSum h_sum, h_sq;
                for (const BatchPartial* b : full) {
                    const double h = (b->s2[lower_index(i, j)] - delta[i] * b->s1[j] -
                                      delta[j] * b->s1[i] + B * delta[i] * delta[j]) /
                                     B;
                    h_sum.add(h);
                    h_sq.add(h * h);
                }
                const double var_h =
                    (h_sq.value() - h_sum.value() * h_sum.value() / nb) / (nb - 1.0);
                const double se = std::sqrt(std::max(0.0, var_h) / nb);
                est.se_cov(i, j) = se;
                est.se_cov(j, i) = se;
            }
    }
    return est;
}

McEstimate run_with_source(std::size_t dim, const StatisticSource& source, const McConfig& mc,
                           std::uint64_t config_hash) {
    mc.validate();
    if (dim == 0) throw ContractViolation("run_with_source: empty statistic vector");

    const std::uint64_t n_batches = (mc.replicas + mc.batch_size - 1) / mc.batch_size;

    // Anchor at replica 0's statistics: deterministic and worker-independent,
    // keeps the third/fourth power sums far from cancellation.
    const std::vector<double> anchor = source(0);
    if (anchor.size() != dim) throw ContractViolation("run_with_source: source dimension");

    BatchSet set(dim, anchor);
    if (!mc.checkpoint_path.empty()) {
        if (const auto loaded = load_checkpoint(mc.checkpoint_path)) {
            if (loaded->config_hash != config_hash)
                throw CheckpointError("checkpoint config hash mismatch: refusing to resume");
            if (loaded->replicas != mc.replicas || loaded->batch_size != mc.batch_size ||
                loaded->anchor.size() != anchor.size() ||
                std::memcmp(loaded->anchor.data(), anchor.data(),
                            anchor.size() * sizeof(double)) != 0)
                throw CheckpointError("checkpoint layout mismatch: refusing to resume");
            for (const auto& b : loaded->batches) {
                if (b.index >= n_batches)
                    throw CheckpointError("checkpoint contains out-of-range batch index");
                set.insert(b);
            }
        }
    }

    std::vector<std::uint64_t> pending;
    for (std::uint64_t b = 0; b < n_batches; ++b)
        if (!set.contains(b)) pending.push_back(b);

    const unsigned workers = resolve_workers(mc.workers);
    const std::uint64_t chunk_len =
        mc.checkpoint_path.empty() ? std::max<std::uint64_t>(pending.size(), 1)
                                   : mc.checkpoint_every;

    auto save_progress = [&]() {
        if (mc.checkpoint_path.empty()) return;
        CheckpointData data;
        data.config_hash = config_hash;
        data.replicas = mc.replicas;
        data.batch_size = mc.batch_size;
        data.anchor = anchor;
        for (const auto& [idx, b] : set.batches()) data.batches.push_back(b);
        save_checkpoint(mc.checkpoint_path, data);
    };

    for (std::size_t chunk_begin = 0; chunk_begin < pending.size(); chunk_begin += chunk_len) {
        const std::size_t chunk_end = std::min(pending.size(), chunk_begin + chunk_len);
        const std::size_t count = chunk_end - chunk_begin;

        std::vector<BatchPartial> slots(count);
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr first_error;
        std::mutex error_mutex;

        auto work = [&]() {
            try {
                while (!failed.load(std::memory_order_relaxed)) {
                    const std::size_t slot = next.fetch_add(1);
                    if (slot >= count) break;
                    const std::uint64_t b = pending[chunk_begin + slot];
                    const std::uint64_t lo = b * mc.batch_size;
                    const std::uint64_t hi = std::min(mc.replicas, lo + mc.batch_size);
                    BatchBuilder builder(b, dim, anchor);
                    for (std::uint64_t r = lo; r < hi; ++r) {
                        const std::vector<double> x = source(r);
                        builder.add(x);
                    }
                    slots[slot] = std::move(builder).take();
                }
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        };

        const unsigned spawn = static_cast<unsigned>(
            std::min<std::size_t>(workers, count));
        std::vector<std::thread> pool;
        pool.reserve(spawn);
        for (unsigned w = 0; w < spawn; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();

        if (first_error) {
            // Keep whatever completed so a checkpointed run can resume.
            for (auto& s : slots)
                if (s.count > 0 && !set.contains(s.index)) set.insert(std::move(s));
            save_progress();
            std::string why = "worker failed";
            try {
                std::rethrow_exception(first_error);
            } catch (const std::exception& e) {
                why = e.what();
            } catch (...) {
            }
            throw McRunError("Monte Carlo run aborted (" + why + "); completed " +
                                 std::to_string(set.batches().size()) + " of " +
                                 std::to_string(n_batches) + " batches",
                             set.batches().size(), n_batches);
        }
        for (auto& s : slots) set.insert(std::move(s));
        save_progress();
    }

    return finalize_batches(set, mc.batch_size);
}

McEstimate run(const ExperimentGeometry& geom, const McConfig& mc) {
    geom.validate();
    mc.validate();
    if (geom.observables.empty()) throw ContractViolation("run: geometry has no observables");
    if (mc.replicas > kMaxReplicaIndex)
        throw ContractViolation("run: replicas exceed the stream index range");
    const StatisticSource source = [&geom, &mc](std::uint64_t replica) {
        return sample_replica(geom, RandomStream{mc.seed, replica});
    };
    return run_with_source(geom.observables.size(), source, mc, experiment_hash(geom, mc));
}

GaussianityReport gaussianity_report(const McEstimate& est) {
    if (est.replicas_used < 1000)
        throw ContractViolation("gaussianity_report: needs at least 1000 replicas");
    const double n = static_cast<double>(est.replicas_used);
    GaussianityReport report;
    report.skew_z = est.skewness / std::sqrt(6.0 / n);
    report.kurt_z = est.excess_kurtosis / std::sqrt(24.0 / n);
    return report;
}

}  // namespace wishart
