#include "cfris/experiments.hpp"

#include <atomic>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace cfris {

std::string to_string(SweepParam p) {
    switch (p) {
        case SweepParam::kApPowerDbm: return "ap_power_dbm";
        case SweepParam::kRisElements: return "ris_elements";
    }
    return "?";
}

SweepParam sweep_param_from_string(const std::string& name) {
    if (name == "ap_power_dbm") return SweepParam::kApPowerDbm;
    if (name == "ris_elements") return SweepParam::kRisElements;
    detail::require(false, "unknown sweep parameter '" + name + "'");
    return SweepParam::kApPowerDbm;
}

SystemConfig apply_sweep_value(const SystemConfig& base, SweepParam param, double value) {
    SystemConfig cfg = base;
    switch (param) {
        case SweepParam::kApPowerDbm:
            cfg.ap_power_max = dbm_to_watt(value);
            break;
        case SweepParam::kRisElements:
            cfg.ris_elements = static_cast<int>(value);
            cfg.active_elements = std::min(cfg.active_elements, cfg.ris_elements);
            break;
    }
    return cfg;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void parallel_for(int jobs, int workers, const std::function<void(int)>& body) {
    if (workers <= 1 || jobs <= 1) {
        for (int i = 0; i < jobs; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) body(i);
    };
    std::vector<std::thread> pool;
    const int n = std::min(workers, jobs);
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace

void run_sweep(const SweepSpec& spec, std::ostream& out) {
    detail::require(!spec.values.empty(), "sweep needs at least one value");
    detail::require(!spec.modes.empty(), "sweep needs at least one mode");
    detail::require(spec.trials >= 1, "sweep needs at least one trial");

    struct Job {
        std::size_t vi, mi;
        int trial;
        std::uint64_t seed;
        TrialResult result;
    };
    std::vector<Job> jobs;
    for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
        for (std::size_t mi = 0; mi < spec.modes.size(); ++mi) {
            for (int t = 0; t < spec.trials; ++t) {
                jobs.push_back({vi, mi, t,
                                derive_seed(spec.master_seed, vi, mi,
                                            static_cast<std::uint64_t>(t)),
                                {}});
            }
        }
    }

    parallel_for(static_cast<int>(jobs.size()), spec.workers, [&](int i) {
        Job& job = jobs[static_cast<std::size_t>(i)];
        const SystemConfig cfg =
            apply_sweep_value(spec.base, spec.param, spec.values[job.vi]);
        job.result = run_trial(cfg, spec.modes[job.mi], job.seed);
    });

    out << "sweep_param,value,mode,trial,seed,status,iters,eta,sum_rate,p_ap_total,"
           "p_ris_total,p_circuit";
    for (int k = 0; k < spec.base.num_users; ++k) out << ",rate_u" << k;
    out << "\n";
    for (const Job& job : jobs) {
        const TrialResult& res = job.result;
        out << to_string(spec.param) << ',' << fmt(spec.values[job.vi]) << ','
            << to_string(spec.modes[job.mi]) << ',' << job.trial << ',' << job.seed << ','
            << (res.feasible ? "ok" : "infeasible") << ',' << res.iterations << ','
            << fmt(res.ee) << ',' << fmt(res.sum_rate) << ',' << fmt(res.power.ap_tx.sum())
            << ',' << fmt(res.power.ris_tx.sum()) << ',' << fmt(res.power.circuit);
        for (int k = 0; k < spec.base.num_users; ++k) {
            out << ',' << (k < res.user_rates.size() ? fmt(res.user_rates(k)) : "0");
        }
        out << "\n";
    }
}

void run_convergence(const SystemConfig& cfg, const std::vector<BaselineMode>& modes,
                     int trials, std::uint64_t master_seed, int workers, std::ostream& out) {
    detail::require(!modes.empty(), "convergence needs at least one mode");
    detail::require(trials >= 1, "convergence needs at least one trial");

    struct Job {
        std::size_t mi;
        int trial;
        std::uint64_t seed;
        TrialResult result;
    };
    std::vector<Job> jobs;
    for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        for (int t = 0; t < trials; ++t) {
            jobs.push_back(
                {mi, t, derive_seed(master_seed, 0, mi, static_cast<std::uint64_t>(t)), {}});
        }
    }
    parallel_for(static_cast<int>(jobs.size()), workers, [&](int i) {
        Job& job = jobs[static_cast<std::size_t>(i)];
        job.result = run_trial(cfg, modes[job.mi], job.seed);
    });

    out << "mode,trial,seed,status,iter,eta,sum_rate,p_total,f1,max_violation\n";
    for (const Job& job : jobs) {
        const char* status = job.result.feasible ? "ok" : "infeasible";
        for (const IterationRecord& rec : job.result.trace.records) {
            out << to_string(modes[job.mi]) << ',' << job.trial << ',' << job.seed << ','
                << status << ',' << rec.iter << ',' << fmt(rec.ee) << ','
                << fmt(rec.sum_rate) << ',' << fmt(rec.power.total) << ','
                << fmt(rec.dinkelbach) << ',' << fmt(rec.max_violation) << "\n";
        }
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::vector<SummaryRow> summarize(std::istream& csv) {
    std::string header;
    detail::require(static_cast<bool>(std::getline(csv, header)), "empty CSV input");
    const std::vector<std::string> cols = split_csv(header);
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (cols[i] == name) return i;
        }
        detail::require(false, "CSV is missing column '" + name + "'");
        return std::size_t{0};
    };
    const std::size_t c_value = col("value");
    const std::size_t c_mode = col("mode");
    const std::size_t c_status = col("status");
    const std::size_t c_eta = col("eta");
    const std::size_t c_rate = col("sum_rate");

    struct Acc {
        std::vector<double> eta, rate;
        int infeasible = 0;
    };
    std::map<std::pair<double, std::string>, Acc> groups;
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        detail::require(fields.size() >= cols.size(), "CSV row has too few fields");
        ++rows;
        Acc& acc = groups[{std::stod(fields[c_value]), fields[c_mode]}];
        if (fields[c_status] == "ok") {
            acc.eta.push_back(std::stod(fields[c_eta]));
            acc.rate.push_back(std::stod(fields[c_rate]));
        } else {
            ++acc.infeasible;
        }
    }
    detail::require(rows > 0, "CSV has a header but no data rows");

    auto mean_stderr = [](const std::vector<double>& xs) {
        if (xs.empty()) return std::pair<double, double>{0.0, 0.0};
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        if (xs.size() < 2) return std::pair<double, double>{mean, 0.0};
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var /= static_cast<double>(xs.size() - 1);
        return std::pair<double, double>{mean,
                                         std::sqrt(var / static_cast<double>(xs.size()))};
    };

    std::vector<SummaryRow> out;
    for (const auto& [key, acc] : groups) {
        SummaryRow row;
        row.value = key.first;
        row.mode = key.second;
        row.trials = static_cast<int>(acc.eta.size());
        row.infeasible = acc.infeasible;
        std::tie(row.eta_mean, row.eta_stderr) = mean_stderr(acc.eta);
        std::tie(row.sum_rate_mean, row.sum_rate_stderr) = mean_stderr(acc.rate);
        out.push_back(std::move(row));
    }
    return out;
}

void write_summary(const std::vector<SummaryRow>& rows, std::ostream& out) {
    out << "value,mode,trials,infeasible,eta_mean,eta_stderr,sum_rate_mean,sum_rate_stderr\n";
    for (const SummaryRow& r : rows) {
        out << fmt(r.value) << ',' << r.mode << ',' << r.trials << ',' << r.infeasible << ','
            << fmt(r.eta_mean) << ',' << fmt(r.eta_stderr) << ',' << fmt(r.sum_rate_mean)
            << ',' << fmt(r.sum_rate_stderr) << "\n";
    }
}

}  // namespace cfris
