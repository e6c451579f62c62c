#include "l1est/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <system_error>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "l1est/errors.hpp"
#include "l1est/lowerbound.hpp"
#include "l1est/rng.hpp"

namespace l1est {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Inverse-CDF sampler over a fixed atom list.
struct AtomSampler {
    std::vector<double> t;
    std::vector<double> cdf;

    explicit AtomSampler(const DiscretePrior& prior, double scale) {
        double acc = 0.0;
        for (const auto& a : prior.atoms()) {
            t.push_back(a.t * scale);
            acc += a.w;
            cdf.push_back(acc);
        }
        cdf.back() = 1.0;
    }
    double operator()(double u) const {
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        return t[std::min<std::size_t>(it - cdf.begin(), t.size() - 1)];
    }
};

struct ThetaDrawer {
    const Scenario& s;
    std::optional<AtomSampler> atoms;

    explicit ThetaDrawer(const Scenario& sc) : s(sc) {
        if (const auto* a = std::get_if<AlternationAtoms>(&s.family)) {
            const PriorPair pair = construct_prior_pair(a->k);
            atoms.emplace(a->which == 0 ? pair.nu0 : pair.nu1, a->M);
        }
    }

    void draw(const CounterRng& rng, std::uint64_t stream, std::span<double> out) const {
        std::visit(Overloaded{
                       [&](const ZeroVector&) { std::fill(out.begin(), out.end(), 0.0); },
                       [&](const ConstantAt& c) { std::fill(out.begin(), out.end(), c.value); },
                       [&](const AlternationAtoms&) {
                           for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*atoms)(rng.uniform(stream, i));
                       },
                       [&](const TwoSpike& t) {
                           std::fill(out.begin(), out.end(), 0.0);
                           for (std::size_t i = 0; i < t.count; ++i) out[i] = i % 2 == 0 ? t.value : -t.value;
                       },
                       [&](const Custom& c) { std::copy(c.theta.begin(), c.theta.end(), out.begin()); },
                   },
                   s.family);
    }
};

[[noreturn]] void rethrow_with_context(std::exception_ptr ep, const std::string& ctx) {
    try {
        std::rethrow_exception(ep);
    } catch (const DataError& e) {
        throw DataError(ctx + e.what(), e.index());
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(ctx + e.what(), e.last_spread());
    } catch (const ConditioningError& e) {
        throw ConditioningError(ctx + e.what(), e.condition_estimate());
    } catch (const IntegrationError& e) {
        throw IntegrationError(ctx + e.what(), e.achieved_tolerance());
    } catch (const ConstructionError& e) {
        throw ConstructionError(ctx + e.what());
    } catch (const DomainError& e) {
        throw DomainError(ctx + e.what());
    } catch (const DegreeOverflowError& e) {
        throw DegreeOverflowError(ctx + e.what());
    } catch (const RangeError& e) {
        throw RangeError(ctx + e.what());
    }
}

std::uint64_t replication_seed(std::uint64_t seed, std::uint32_t scenario, std::uint32_t rep) {
    return mix64(seed ^ mix64((static_cast<std::uint64_t>(scenario) << 32) | rep));
}

double effective_M(const EstimatorSpec& spec, std::size_t n) {
    switch (spec.variant) {
        case Variant::Bounded: return *spec.M;
        case Variant::GrowingBound: return growing_bound(static_cast<double>(n), spec.c);
        case Variant::Unbounded: return HybridParams::unbounded(static_cast<double>(n)).M_n;
        case Variant::Sparse: return HybridParams::sparse(static_cast<double>(n)).M_n;
    }
    return 0.0;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

using nlohmann::json;

template <class T>
T required(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw DomainError(fmt::format("{}: missing field '{}'", where, key));
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DomainError(fmt::format("{}: field '{}': {}", where, key, e.what()));
    }
}

template <class T>
std::optional<T> optional_field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return required<T>(j, key, where);
}

ThetaFamily parse_family(const json& j, const std::string& where) {
    const auto name = required<std::string>(j, "family", where);
    if (name == "zero") return ZeroVector{};
    if (name == "constant") return ConstantAt{required<double>(j, "value", where)};
    if (name == "alternation")
        return AlternationAtoms{required<int>(j, "k", where), required<double>(j, "M", where),
                                optional_field<int>(j, "prior", where).value_or(1)};
    if (name == "two_spike")
        return TwoSpike{required<std::size_t>(j, "count", where), required<double>(j, "value", where)};
    if (name == "custom") return Custom{required<std::vector<double>>(j, "values", where)};
    throw DomainError(fmt::format("{}: unknown theta family '{}'", where, name));
}

EstimatorSpec parse_estimator(const json& j, const std::string& where) {
    EstimatorSpec e;
    e.variant = parse_variant(required<std::string>(j, "variant", where));
    e.M = optional_field<double>(j, "M", where);
    e.K_override = optional_field<int>(j, "K", where);
    if (auto b = optional_field<std::string>(j, "basis", where)) e.basis = parse_basis(*b);
    e.k_n = optional_field<std::size_t>(j, "k_n", where);
    e.c = optional_field<double>(j, "c", where).value_or(2.0);
    return e;
}

json family_json(const ThetaFamily& f) {
    return std::visit(Overloaded{
                          [](const ZeroVector&) { return json{{"family", "zero"}}; },
                          [](const ConstantAt& c) { return json{{"family", "constant"}, {"value", c.value}}; },
                          [](const AlternationAtoms& a) {
                              return json{{"family", "alternation"}, {"k", a.k}, {"M", a.M}, {"prior", a.which}};
                          },
                          [](const TwoSpike& t) {
                              return json{{"family", "two_spike"}, {"count", t.count}, {"value", t.value}};
                          },
                          [](const Custom& c) { return json{{"family", "custom"}, {"values", c.theta}}; },
                      },
                      f);
}

}  // namespace

std::string describe(const ThetaFamily& family) {
    return std::visit(Overloaded{
                          [](const ZeroVector&) { return std::string("ZeroVector"); },
                          [](const ConstantAt& c) { return fmt::format("ConstantAt({})", c.value); },
                          [](const AlternationAtoms& a) {
                              return fmt::format("AlternationAtoms(k={}, M={}, nu{})", a.k, a.M, a.which);
                          },
                          [](const TwoSpike& t) { return fmt::format("TwoSpike({} x {})", t.count, t.value); },
                          [](const Custom& c) { return fmt::format("Custom(len {})", c.theta.size()); },
                      },
                      family);
}

bool is_random(const ThetaFamily& family) noexcept {
    return std::holds_alternative<AlternationAtoms>(family);
}

void Scenario::validate() const {
    if (id.empty()) throw DomainError("scenario id must not be empty");
    if (replications < 2) throw DomainError(fmt::format("scenario '{}': replications must be >= 2", id));
    if (n < 1) throw DomainError(fmt::format("scenario '{}': n must be positive", id));
    std::visit(Overloaded{
                   [](const ZeroVector&) {},
                   [&](const ConstantAt& c) {
                       if (!std::isfinite(c.value)) throw DomainError(fmt::format("scenario '{}': value not finite", id));
                   },
                   [&](const AlternationAtoms& a) {
                       if (a.k < 2 || a.k > 80 || a.k % 2 != 0 || !(a.M > 0.0) || (a.which != 0 && a.which != 1))
                           throw DomainError(fmt::format("scenario '{}': bad alternation family", id));
                   },
                   [&](const TwoSpike& t) {
                       if (t.count > n || !std::isfinite(t.value))
                           throw DomainError(fmt::format("scenario '{}': spike count exceeds n", id));
                   },
                   [&](const Custom& c) {
                       if (c.theta.size() != n)
                           throw DomainError(fmt::format("scenario '{}': custom theta has length {}, n = {}", id,
                                                         c.theta.size(), n));
                       for (double t : c.theta)
                           if (!std::isfinite(t)) throw DomainError(fmt::format("scenario '{}': theta not finite", id));
                   },
               },
               family);
    EstimatorSpec spec = estimator;
    spec.n = n;
    spec.validate();
}

void draw_theta(const Scenario& s, std::uint64_t seed, std::uint32_t scenario_index, std::uint32_t replication,
                std::span<double> out) {
    if (out.size() != s.n) throw DomainError("theta buffer must have length n");
    ThetaDrawer(s).draw(CounterRng(seed), stream_id(StreamDomain::Theta, scenario_index, replication), out);
}

double RiskReport::bias_stderr() const noexcept {
    if (replications < 2) return 0.0;
    return std::sqrt(variance / static_cast<double>(replications - 1));
}

double pairwise_sum(std::span<const double> v) noexcept {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

RiskReport run_scenario(const Scenario& s, std::uint64_t seed, std::uint32_t scenario_index, std::size_t workers) {
    s.validate();
    EstimatorSpec spec = s.estimator;
    spec.n = s.n;
    const std::size_t R = s.replications;
    const ThetaDrawer drawer(s);
    const CounterRng rng(seed);
    // The sparse estimator targets the average over the k_n nonzero coordinates.
    const double target_divisor = static_cast<double>(spec.variant == Variant::Sparse ? *spec.k_n : s.n);

    std::vector<double> estimates(R), errors(R);
    std::mutex fail_mutex;
    std::exception_ptr failure;
    std::size_t failed_rep = R;

    auto work = [&](std::size_t first, std::size_t stride) {
        std::vector<double> theta(s.n), y(s.n);
        for (std::size_t r = first; r < R; r += stride) {
            {
                std::lock_guard lock(fail_mutex);
                if (failed_rep < r) return;
            }
            try {
                const auto rep = static_cast<std::uint32_t>(r);
                drawer.draw(rng, stream_id(StreamDomain::Theta, scenario_index, rep), theta);
                rng.fill_normal(stream_id(StreamDomain::Noise, scenario_index, rep), 0, y);
                double T = 0.0;
                for (std::size_t i = 0; i < s.n; ++i) {
                    y[i] += theta[i];
                    T += std::fabs(theta[i]);
                }
                T /= target_divisor;
                EstimatorSpec local = spec;
                local.seed = replication_seed(seed, scenario_index, rep);
                estimates[r] = estimate(local, y);
                errors[r] = estimates[r] - T;
            } catch (...) {
                std::lock_guard lock(fail_mutex);
                if (r < failed_rep) {
                    failed_rep = r;
                    failure = std::current_exception();
                }
                return;
            }
        }
    };

    const std::size_t threads = std::clamp<std::size_t>(workers, 1, R);
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    }
    if (failure)
        rethrow_with_context(failure, fmt::format("scenario '{}', replication {}: ", s.id, failed_rep));

    const double Rd = static_cast<double>(R);
    RiskReport out;
    out.scenario_id = s.id;
    out.n = s.n;
    out.variant = spec.variant;
    out.K = resolved_half_degree(spec);
    out.M = effective_M(spec, s.n);
    out.replications = R;
    out.estimate_mean = pairwise_sum(estimates) / Rd;
    out.bias = pairwise_sum(errors) / Rd;
    std::vector<double> dev2(R), sq(R);
    for (std::size_t r = 0; r < R; ++r) {
        dev2[r] = (errors[r] - out.bias) * (errors[r] - out.bias);
        sq[r] = errors[r] * errors[r];
    }
    out.variance = pairwise_sum(dev2) / Rd;
    out.mse = pairwise_sum(sq) / Rd;
    for (std::size_t r = 0; r < R; ++r) dev2[r] = (sq[r] - out.mse) * (sq[r] - out.mse);
    out.mc_stderr = std::sqrt(pairwise_sum(dev2) / (Rd - 1.0) / Rd);
    const AnalyticBounds b = analytic_bounds(spec, s.n);
    out.bias_bound = b.bias;
    out.var_bound = b.variance;
    return out;
}

RunConfig parse_run_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw DomainError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!j.is_object()) throw DomainError("config must be a JSON object");
    RunConfig c;
    c.seed = required<std::uint64_t>(j, "seed", "config");
    c.output_path = optional_field<std::string>(j, "output_path", "config").value_or("");
    const auto format = optional_field<std::string>(j, "format", "config").value_or("csv");
    if (format == "csv") c.format = OutputFormat::Csv;
    else if (format == "json") c.format = OutputFormat::Json;
    else throw DomainError(fmt::format("config: unknown format '{}'", format));
    c.workers = optional_field<std::size_t>(j, "workers", "config").value_or(1);
    if (c.workers < 1) throw DomainError("config: workers must be positive");
    c.slack = optional_field<double>(j, "slack", "config").value_or(2.0);
    if (!(c.slack > 0.0)) throw DomainError("config: slack must be positive");

    const auto scenarios = required<json>(j, "scenarios", "config");
    if (!scenarios.is_array() || scenarios.empty()) throw DomainError("config: scenarios must be a non-empty array");
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const json& sj = scenarios[i];
        const std::string where = fmt::format("scenario {}", i);
        Scenario s;
        s.id = required<std::string>(sj, "id", where);
        s.n = required<std::size_t>(sj, "n", where);
        s.replications = required<std::size_t>(sj, "replications", where);
        s.family = parse_family(required<json>(sj, "theta", where), where);
        s.estimator = parse_estimator(required<json>(sj, "estimator", where), where);
        s.validate();
        c.scenarios.push_back(std::move(s));
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::system_error(std::make_error_code(std::errc::no_such_file_or_directory), path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::size_t resolve_workers(std::size_t configured) {
    const char* env = std::getenv("L1EST_WORKERS");
    if (env == nullptr || *env == '\0') return std::max<std::size_t>(configured, 1);
    std::size_t value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc() || ptr != end || value == 0)
        throw DomainError(fmt::format("L1EST_WORKERS must be a positive integer, got '{}'", env));
    return value;
}

std::vector<RiskReport> run_all(const RunConfig& config, std::size_t workers) {
    std::vector<RiskReport> out;
    for (std::size_t i = 0; i < config.scenarios.size(); ++i)
        out.push_back(run_scenario(config.scenarios[i], config.seed, static_cast<std::uint32_t>(i), workers));
    return out;
}

std::string to_csv(const std::vector<RiskReport>& reports) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : reports) {
        out += fmt::format("{},{},{},{},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                           csv_field(r.scenario_id), r.n, to_string(r.variant), r.K, r.M, r.replications, r.bias,
                           r.variance, r.mse, r.mc_stderr, r.bias_bound, r.var_bound);
    }
    return out;
}

std::string to_json(const std::vector<RiskReport>& reports, const RunConfig& config) {
    json rows = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        json row{{"scenario_id", r.scenario_id},
                 {"n", r.n},
                 {"variant", std::string(to_string(r.variant))},
                 {"K", r.K},
                 {"M", r.M},
                 {"replications", r.replications},
                 {"estimate_mean", r.estimate_mean},
                 {"bias", r.bias},
                 {"variance", r.variance},
                 {"mse", r.mse},
                 {"mc_stderr", r.mc_stderr},
                 {"bias_bound", r.bias_bound},
                 {"var_bound", r.var_bound}};
        if (i < config.scenarios.size()) row["theta"] = family_json(config.scenarios[i].family);
        rows.push_back(std::move(row));
    }
    json doc{{"metadata", {{"sampler", std::string(kSamplerName)}, {"seed", config.seed}}}, {"reports", rows}};
    return doc.dump(2) + "\n";
}

bool ComplianceReport::all_pass() const noexcept {
    return std::all_of(rows.begin(), rows.end(), [](const ComplianceRow& r) { return r.bias_ok && r.var_ok; });
}

std::string ComplianceReport::to_text() const {
    std::string out = fmt::format("{:<24} {:>12} {:>12} {:>5} {:>12} {:>12} {:>5}\n", "scenario", "|bias|",
                                  "limit", "ok", "variance", "limit", "ok");
    for (const auto& r : rows)
        out += fmt::format("{:<24} {:>12.4e} {:>12.4e} {:>5} {:>12.4e} {:>12.4e} {:>5}\n", r.scenario_id,
                           std::fabs(r.bias), r.bias_limit, r.bias_ok ? "yes" : "NO", r.variance, r.var_limit,
                           r.var_ok ? "yes" : "NO");
    return out;
}

ComplianceReport bound_compliance_report(const std::vector<RiskReport>& reports, double slack) {
    if (reports.empty()) throw DomainError("compliance report needs at least one risk report");
    ComplianceReport out;
    out.slack = slack;
    for (const auto& r : reports) {
        ComplianceRow row;
        row.scenario_id = r.scenario_id;
        row.bias = r.bias;
        row.bias_limit = slack * r.bias_bound;
        row.bias_ok = std::fabs(r.bias) <= row.bias_limit;
        row.variance = r.variance;
        row.var_limit = slack * r.var_bound;
        row.var_ok = r.variance <= row.var_limit;
        out.rows.push_back(row);
    }
    return out;
}

std::vector<double> read_observations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::system_error(std::make_error_code(std::errc::no_such_file_or_directory), path.string());
    std::vector<double> y;
    std::string line;
    for (std::size_t lineno = 0; std::getline(in, line); ++lineno) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const char* b = line.data() + first;
        const char* e = line.data() + last + 1;
        if (*b == '+') ++b;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e || !std::isfinite(v))
            throw DataError(fmt::format("line {}: '{}' is not a finite number", lineno + 1, line), lineno);
        y.push_back(v);
    }
    return y;
}

void write_observations(const std::filesystem::path& path, std::span<const double> y) {
    std::ofstream out(path);
    if (!out) throw std::system_error(std::make_error_code(std::errc::io_error), path.string());
    for (double v : y) out << fmt::format("{:.17g}\n", v);
}

}  // namespace l1est
