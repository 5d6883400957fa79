#include "ymlat/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <thread>

#include "json.hpp"
#include "ymlat/errors.hpp"
#include "ymlat/gaugefix.hpp"
#include "ymlat/norms.hpp"
#include "ymlat/sampler.hpp"
#include "ymlat/snapshot.hpp"

namespace ymlat {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x); // shortest form that round-trips
    return std::string(buf, r.ptr);
}

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

// Runs f(0..n-1); the exception of the lowest failing index is rethrown.
template <class F>
void parallel_for(int n, int workers, F&& f) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(n, 0)));
    auto guarded = [&](int k) {
        try {
            f(k);
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    };
    if (workers <= 1 || n <= 1) {
        for (int k = 0; k < n; ++k) guarded(k);
    } else {
        std::atomic<int> next{0};
        std::vector<std::jthread> pool;
        for (int w = 0; w < std::min(workers, n); ++w)
            pool.emplace_back([&] {
                for (int k = next++; k < n; k = next++) guarded(k);
            });
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::ofstream open_text(const fs::path& p) {
    fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::trunc);
    if (!os) throw Error("cannot open " + p.string() + " for writing");
    return os;
}

void reset_dir(const fs::path& p) {
    fs::remove_all(p);
    fs::create_directories(p);
}

std::vector<fs::path> list_snapshots(const fs::path& dir, const std::string& prefix) {
    std::vector<fs::path> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (name.starts_with(prefix) && e.path().extension() == ".ymlf") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// "U_c000_s00001.ymlf" -> "c000_s00001"
std::string sample_id(const fs::path& p) {
    const auto stem = p.stem().string();
    return stem.substr(stem.find('_') + 1);
}

json config_json(const ExperimentConfig& c) {
    json j = json::object();
    const auto text = to_text(c);
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl - pos);
        const auto eq = line.find(" = ");
        j[line.substr(0, eq)] = line.substr(eq + 3);
        pos = nl + 1;
    }
    return j;
}

// Adds one stage record to manifest.json, starting over when the stored
// config hash differs.
void update_manifest(const ExperimentConfig& c, const std::string& stage, json record,
                     const std::vector<std::string>& files) {
    const auto dir = output_directory(c);
    const auto path = dir / "manifest.json";
    json m;
    if (fs::exists(path)) {
        std::ifstream is(path);
        try {
            m = json::parse(is);
        } catch (const json::exception&) {
            m = json();
        }
        if (!m.is_object() || m.value("config_hash", "") != config_hash(c)) m = json();
    }
    if (m.is_null()) {
        m = json::object();
        m["config_hash"] = config_hash(c);
        m["code_version"] = YMLAT_VERSION;
        m["config"] = config_json(c);
        m["stages"] = json::object();
        m["artifacts"] = json::array();
    }
    record["files"] = files;
    m["stages"][stage] = std::move(record);
    std::vector<std::string> all;
    for (const auto& [name, rec] : m["stages"].items())
        for (const auto& f : rec["files"]) all.push_back(f.get<std::string>());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    m["artifacts"] = all;
    auto os = open_text(path);
    os << m.dump(2) << '\n';
}

ActionSpec action_spec(const ExperimentConfig& c) {
    return ActionSpec{parse_action(c.action), c.N1, c.truncation};
}

// ---- sample ----------------------------------------------------------------

template <LieGroup G>
StageResult sample_stage(const ExperimentConfig& c) {
    Stopwatch clock;
    const auto dir = output_directory(c);
    reset_dir(dir / "snapshots");
    StageResult res;
    ChainSettings cs;
    cs.burnin = c.burnin;
    cs.thin = c.thin;
    cs.samples = c.samples;
    cs.proposal_sigma = c.proposal_sigma;
    cs.seed = c.seed;
    const auto spec = action_spec(c);
    const auto chains = c.samples > 0 ? run_chains<G>(spec, cs, c.chains, c.workers) : std::vector<ChainResult<G>>{};
    const auto hash = config_hash(c);
    auto csv = open_text(dir / "samples.csv");
    csv << "config_hash,sample,chain,index,mean_plaquette_trace,acceptance\n";
    json seeds = json::array(), chain_stats = json::array();
    for (int ch = 0; ch < c.chains; ++ch) seeds.push_back({{"chain", ch}, {"seed", c.seed}, {"stream", ch}});
    for (std::size_t ch = 0; ch < chains.size(); ++ch) {
        const auto& r = chains[ch];
        chain_stats.push_back({{"chain", ch}, {"acceptance", r.acceptance}, {"sigma", r.sigma}, {"burnin", r.burnin},
                               {"thin", r.thin}, {"tau_int", r.tau_int}});
        for (std::size_t k = 0; k < r.samples.size(); ++k) {
            char id[32];
            std::snprintf(id, sizeof id, "c%03zu_s%05zu", ch, k);
            const std::string file = std::string("snapshots/U_") + id + ".ymlf";
            write_snapshot(dir / file, r.samples[k],
                           std::string(to_string(spec.kind)) + " N=" + std::to_string(c.N1) + " chain=" + std::to_string(ch));
            res.files.push_back(file);
            csv << hash << ',' << id << ',' << ch << ',' << k << ',' << num(mean_plaquette_trace(r.samples[k])) << ','
                << num(r.acceptance) << '\n';
        }
    }
    res.files.push_back("samples.csv");
    update_manifest(c, "sample", {{"wall_time", clock.seconds()}, {"seeds", seeds}, {"chains", chain_stats}}, res.files);
    return res;
}

// ---- gaugefix --------------------------------------------------------------

template <LieGroup G>
struct FixOutcome {
    std::optional<LandauResult<G>> result;
    std::string status = "ok";
    double wall_time = 0.0;
};

template <LieGroup G>
StageResult gaugefix_stage(const ExperimentConfig& c) {
    Stopwatch clock;
    const auto dir = output_directory(c);
    const auto inputs = list_snapshots(dir / "snapshots", "U_");
    reset_dir(dir / "gauge");
    std::vector<FixOutcome<G>> out(inputs.size());
    parallel_for(static_cast<int>(inputs.size()), c.workers, [&](int k) {
        Stopwatch sw;
        auto& o = out[static_cast<std::size_t>(k)];
        const auto U = read_gauge_field<G>(inputs[static_cast<std::size_t>(k)]);
        if (U.scale() != c.N1) throw ConfigError("snapshot scale does not match N1: " + inputs[k].string());
        try {
            if constexpr (G::simply_connected) o.result = full_gauge(U, c.N0, c.alpha.front(), c.threshold);
            else o.result = landau_gauge(U, c.N0, c.threshold);
        } catch (const GaugeTooRough&) {
            o.status = "gauge_too_rough";
        } catch (const HomotopyFailure&) {
            o.status = "homotopy_failure";
        } catch (const CutLocusError&) {
            o.status = "cut_locus";
        }
        o.wall_time = sw.seconds();
    });
    StageResult res;
    const auto hash = config_hash(c);
    auto csv = open_text(dir / "gaugefix.csv");
    csv << "config_hash,sample,scale,max_bond_norm,max_E,delta,contract_residual,status\n";
    json per_sample = json::array();
    int failures = 0;
    const std::string chain = G::simply_connected ? "axial(N0=" + std::to_string(c.N0) + ")+" : "";
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const auto id = sample_id(inputs[k]);
        const auto& o = out[k];
        per_sample.push_back({{"sample", id}, {"status", o.status}, {"wall_time", o.wall_time}});
        if (!o.result) {
            ++failures;
            csv << hash << ',' << id << ",nan,nan,nan,nan,nan," << o.status << '\n';
            continue;
        }
        for (const auto& s : o.result->scales)
            csv << hash << ',' << id << ',' << s.scale << ',' << num(s.max_bond_norm) << ',' << num(s.max_E) << ','
                << num(s.max_delta) << ',' << num(s.contract_residual) << ',' << o.status << '\n';
        for (const auto& w : o.result->warnings) res.warnings.push_back(id + ": " + w);
        const auto prov = chain + "landau(N0=" + std::to_string(c.N0) + ",N1=" + std::to_string(c.N1) + ") of " +
                          inputs[k].filename().string();
        write_snapshot(dir / "gauge" / ("A_" + id + ".ymlf"), o.result->A, prov);
        write_snapshot(dir / "gauge" / ("g_" + id + ".ymlf"), o.result->g, prov);
        res.files.push_back("gauge/A_" + id + ".ymlf");
        res.files.push_back("gauge/g_" + id + ".ymlf");
    }
    res.files.push_back("gaugefix.csv");
    if (!inputs.empty() && failures == static_cast<int>(inputs.size())) res.exit_code = exit_numeric;
    update_manifest(c, "gaugefix",
                    {{"wall_time", clock.seconds()}, {"samples", per_sample}, {"failures", failures}, {"warnings", res.warnings}},
                    res.files);
    return res;
}

// ---- norms -----------------------------------------------------------------

json segment_json(const AxisSegment& s) {
    return {{"dir", s.dir == Dir::e1 ? 1 : 2}, {"offset", s.offset}, {"start", s.start}, {"length", s.length}};
}

template <LieGroup G>
StageResult norms_stage(const ExperimentConfig& c) {
    if (c.N1 > norm_scan_limit && !c.allow_large)
        throw ConfigError("norm scans above N1 = " + std::to_string(norm_scan_limit) + " need allow_large = true");
    Stopwatch clock;
    const auto dir = output_directory(c);
    const auto inputs = list_snapshots(dir / "gauge", "A_");
    const auto hash = config_hash(c);
    auto csv = open_text(dir / "norms.csv");
    csv << "config_hash,sample,N,alpha,gr_norm,rho_norm,total,hoelder_ratio\n";
    json witnesses = json::array();
    double scan_time = 0.0;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const auto A = read_one_form<G>(inputs[k]);
        const auto id = sample_id(inputs[k]);
        for (std::size_t a = 0; a < c.alpha.size(); ++a) {
            const double alpha = c.alpha[a];
            const auto r = compute_norms(A, alpha, c.workers);
            scan_time += r.wall_time;
            auto rng = make_stream(c.seed, 0x100000000ull + k * c.alpha.size() + a);
            const double ratio = c.hoelder_samples > 0 ? hoelder_dH_check(A, alpha, r, c.hoelder_samples, rng) : NAN;
            csv << hash << ',' << id << ',' << A.scale() << ',' << num(alpha) << ',' << num(r.gr_norm) << ','
                << num(r.rho_norm) << ',' << num(r.total()) << ',' << num(ratio) << '\n';
            witnesses.push_back({{"sample", id},
                                 {"N", A.scale()},
                                 {"alpha", alpha},
                                 {"gr", segment_json(r.gr_witness)},
                                 {"rho", {segment_json(r.rho_witness.first), segment_json(r.rho_witness.second)}}});
        }
    }
    {
        auto os = open_text(dir / "norms_witnesses.json");
        os << json{{"config_hash", hash}, {"witnesses", witnesses}}.dump(2) << '\n';
    }
    StageResult res;
    res.files = {"norms.csv", "norms_witnesses.json"};
    update_manifest(c, "norms", {{"wall_time", clock.seconds()}, {"scan_time", scan_time}}, res.files);
    return res;
}

// ---- scaling ---------------------------------------------------------------

struct RectangleMeasure {
    int plaquettes = 0;
    double area = 0.0;
    double log_norm = 0.0;
    std::vector<double> variation; // one per q; empty if the anti-development hit the cut locus
};

template <LieGroup G>
std::vector<RectangleMeasure> measure_rectangles(const GaugeField<G>& U, int max_area, const std::vector<double>& qs) {
    std::vector<RectangleMeasure> out;
    for (const auto& r : all_rectangles(U.scale())) {
        if (r.plaquettes() > max_area) continue;
        RectangleMeasure m;
        m.plaquettes = r.plaquettes();
        m.area = r.area();
        m.log_norm = norm(G::log(holonomy(U, r)));
        try {
            const auto X = anti_development(U, r);
            for (double q : qs) m.variation.push_back(q_variation(X, q).value);
        } catch (const CutLocusError&) {
            m.variation.clear();
        }
        out.push_back(std::move(m));
    }
    return out;
}

template <LieGroup G>
StageResult scaling_stage(const ExperimentConfig& c) {
    Stopwatch clock;
    const auto dir = output_directory(c);
    const auto inputs = list_snapshots(dir / "snapshots", "U_");
    const auto hash = config_hash(c);
    const auto& qs = c.q;
    // per sample: rectangles at the sampling scale, and at every scale n <= N1
    std::vector<std::vector<RectangleMeasure>> fine(inputs.size());
    std::vector<std::vector<RectangleMeasure>> all_scales(inputs.size());
    parallel_for(static_cast<int>(inputs.size()), c.workers, [&](int k) {
        const auto U = read_gauge_field<G>(inputs[static_cast<std::size_t>(k)]);
        fine[k] = measure_rectangles(U, c.max_area, qs);
        for (int n = 1; n <= U.scale(); ++n) {
            auto m = n == U.scale() ? fine[k] : measure_rectangles(coarsen(U, n), c.max_area, qs);
            all_scales[k].insert(all_scales[k].end(), m.begin(), m.end());
        }
    });

    auto csv = open_text(dir / "scaling.csv");
    csv << "config_hash,N,alpha,beta,q,plaquettes,area,count,skipped,mean_log_pow,mean_var_pow,ratio_log,ratio_var\n";
    for (double alpha : c.alpha)
        for (double beta : c.beta)
            for (std::size_t qi = 0; qi < qs.size(); ++qi) {
                std::map<int, std::array<double, 4>> buckets; // sum log^b, sum var^b, count, skipped
                for (const auto& sample : fine)
                    for (const auto& m : sample) {
                        auto& b = buckets[m.plaquettes];
                        if (m.variation.empty()) {
                            b[3] += 1;
                            continue;
                        }
                        b[0] += std::pow(m.log_norm, beta);
                        b[1] += std::pow(m.variation[qi], beta);
                        b[2] += 1;
                    }
                for (const auto& [k, b] : buckets) {
                    const double area = std::ldexp(static_cast<double>(k), -2 * c.N1);
                    const double ml = b[2] > 0 ? b[0] / b[2] : NAN, mv = b[2] > 0 ? b[1] / b[2] : NAN;
                    const double den = std::pow(area, beta * alpha / 2.0);
                    csv << hash << ',' << c.N1 << ',' << num(alpha) << ',' << num(beta) << ',' << num(qs[qi]) << ',' << k
                        << ',' << num(area) << ',' << static_cast<long>(b[2]) << ',' << static_cast<long>(b[3]) << ','
                        << num(ml) << ',' << num(mv) << ',' << num(ml / den) << ',' << num(mv / den) << '\n';
                }
            }

    auto sup = open_text(dir / "scaling_sup.csv");
    sup << "config_hash,sample,alpha,beta,q,sup_stat,skipped\n";
    for (std::size_t s = 0; s < inputs.size(); ++s)
        for (double alpha : c.alpha)
            for (double beta : c.beta)
                for (std::size_t qi = 0; qi < qs.size(); ++qi) {
                    double best = 0.0;
                    long skipped = 0;
                    for (const auto& m : all_scales[s]) {
                        if (m.variation.empty()) {
                            ++skipped;
                            continue;
                        }
                        const double v = (std::pow(m.log_norm, beta) + std::pow(m.variation[qi], beta)) /
                                         std::pow(m.area, beta * alpha / 2.0);
                        best = std::max(best, v);
                    }
                    sup << hash << ',' << sample_id(inputs[s]) << ',' << num(alpha) << ',' << num(beta) << ','
                        << num(qs[qi]) << ',' << num(best) << ',' << skipped << '\n';
                }
    StageResult res;
    res.files = {"scaling.csv", "scaling_sup.csv"};
    update_manifest(c, "scaling", {{"wall_time", clock.seconds()}}, res.files);
    return res;
}

template <template <class> class Stage>
StageResult dispatch(const ExperimentConfig& c) {
    validate(c);
    if (c.group == "u1") return Stage<U1>::run(c);
    return Stage<SU2>::run(c);
}

template <class G>
struct SampleStage {
    static StageResult run(const ExperimentConfig& c) { return sample_stage<G>(c); }
};
template <class G>
struct GaugefixStage {
    static StageResult run(const ExperimentConfig& c) { return gaugefix_stage<G>(c); }
};
template <class G>
struct NormsStage {
    static StageResult run(const ExperimentConfig& c) { return norms_stage<G>(c); }
};
template <class G>
struct ScalingStage {
    static StageResult run(const ExperimentConfig& c) { return scaling_stage<G>(c); }
};

} // namespace

StageResult cmd_sample(const ExperimentConfig& c) { return dispatch<SampleStage>(c); }
StageResult cmd_gaugefix(const ExperimentConfig& c) { return dispatch<GaugefixStage>(c); }
StageResult cmd_norms(const ExperimentConfig& c) { return dispatch<NormsStage>(c); }
StageResult cmd_scaling(const ExperimentConfig& c) { return dispatch<ScalingStage>(c); }

StageResult cmd_all(const ExperimentConfig& c) {
    StageResult total;
    for (auto stage : {cmd_sample, cmd_gaugefix, cmd_norms, cmd_scaling}) {
        auto r = stage(c);
        total.files.insert(total.files.end(), r.files.begin(), r.files.end());
        total.warnings.insert(total.warnings.end(), r.warnings.begin(), r.warnings.end());
        if (r.exit_code != exit_ok) {
            total.exit_code = r.exit_code;
            return total;
        }
    }
    return total;
}

} // namespace ymlat
