#include "fpp/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fpp/cutset.hpp"
#include "fpp/cylflow.hpp"
#include "fpp/flow.hpp"
#include "fpp/lattice.hpp"
#include "fpp/ldp.hpp"
#include "fpp/nu.hpp"

namespace fpp {

namespace {

using nlohmann::json;

const std::vector<std::string> kKinds = {"flow-sample",   "estimate-nu", "phi-tilde",
                                         "cutset-verify", "ldp-rate",    "sum-tail"};

bool known_kind(const std::string& k) {
    for (const auto& s : kKinds)
        if (s == k) return true;
    return false;
}

std::string fnv_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex;
    for (int i = 15; i >= 0; --i) out << ((h >> (4 * i)) & 0xf);
    return out.str();
}

std::string now_utc() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string environment_fingerprint() {
    std::ostringstream out;
    out << sizeof(void*) * 8 << "-bit, " << __VERSION__;
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    out << contents;
}

// The default polyhedral cut through the domain: everything below a plane
// x_1 = c, boxed with a margin so the clip is bounded.
PolyhedralSet slab_cut(const ContinuousDomain& dom, double frac) {
    auto [lo, hi] = dom.bounding_box();
    Vec blo = lo, bhi = hi;
    for (std::size_t i = 0; i < dom.d; ++i) {
        blo[i] -= 1.0;
        bhi[i] += 1.0;
    }
    bhi[0] = lo[0] + frac * (hi[0] - lo[0]);
    return PolyhedralSet({ConvexPolytope::box(blo, bhi)});
}

std::vector<Vec> axis_directions(std::size_t d) {
    std::vector<Vec> dirs;
    for (std::size_t i = 0; i < d; ++i) {
        Vec v(d, 0.0);
        v[i] = 1.0;
        dirs.push_back(v);
    }
    return dirs;
}

json run_flow_sample(const RunConfig& c) {
    ContinuousDomain dom = c.domain();
    json flows = json::array();
    for (int n : c.meshes) {
        LatticeDomain lat = discretize(dom, n);
        double area = std::pow(double(n), double(dom.d) - 1.0);
        json samples = json::array();
        for (std::size_t t = 0; t < c.trials; ++t) {
            CapacityField field{c.law, child_seed(child_seed(c.seed, std::uint64_t(n)), t)};
            double phi = max_flow(domain_problem(lat, field)).value;
            samples.push_back({{"trial", t}, {"phi", phi}, {"phi_per_area", phi / area}});
        }
        flows.push_back({{"n", n}, {"samples", samples}});
    }
    return {{"flows", flows}};
}

json run_estimate_nu(const RunConfig& c) {
    std::vector<Vec> dirs = c.directions.empty() ? axis_directions(c.d) : c.directions;
    NuTable table;
    table.law_json = c.law.to_json();
    table.seed = c.seed;
    for (std::size_t i = 0; i < dirs.size(); ++i)
        table.entries.push_back(
            estimate_nu(dirs[i], 1.0, 1.0, c.meshes, c.trials, c.law, child_seed(c.seed, i)));
    return {{"nu_table", json::parse(table.to_json())}};
}

json run_phi_tilde(const RunConfig& c, std::vector<std::string>& verdicts) {
    ContinuousDomain dom = c.domain();
    NuTable table = NuTable::from_json(read_file(c.nu_table_path));
    std::vector<PolyhedralSet> family;
    for (double frac : {0.35, 0.5, 0.65}) family.push_back(slab_cut(dom, frac));
    PhiTildeResult res = phi_tilde(dom, family, table);
    json cands = json::array();
    for (std::size_t i = 0; i < res.candidates.size(); ++i)
        cands.push_back({{"index", i},
                         {"capacity", res.candidates[i].capacity},
                         {"admissible", res.candidates[i].admissible()}});
    std::ostringstream v;
    v.precision(17);
    v << "continuous min-cut bound " << res.value << " at candidate " << res.argmin;
    verdicts.push_back(v.str());
    return {{"value", res.value}, {"argmin", res.argmin}, {"candidates", cands}};
}

json run_cutset_verify(const RunConfig& c, std::vector<std::string>& verdicts) {
    ContinuousDomain dom = c.domain();
    if (nu_zero_check(c.law, c.d))
        throw InfeasibleError(
            "cutset-verify: calibration infeasible in this regime: the flow constant "
            "vanishes (mass at zero reaches the percolation threshold)");
    int n = c.meshes.front();
    PolyhedralSet P = slab_cut(dom, 0.5);
    ScaffoldConstants used;
    CoveringCutset cc = build_covering_resolved(
        P, dom, ScaffoldConstants{c.l, c.eps, c.h, c.eta, c.zeta}, n, &used);
    LatticeDomain lat = discretize(dom, n);
    json rows = json::array();
    std::size_t ok = 0;
    for (std::size_t t = 0; t < c.trials; ++t) {
        CapacityField field{c.law, child_seed(c.seed, t)};
        UpperBoundResult ub = upper_bound(cc, lat, field);
        bool good = ub.holds && ub.cutset_ok;
        ok += good;
        rows.push_back({{"trial", t},
                        {"phi_n", ub.phi_n},
                        {"bound", ub.bound},
                        {"holds", ub.holds},
                        {"cutset_ok", ub.cutset_ok}});
    }
    std::ostringstream v;
    if (ok == c.trials)
        v << "flow upper bound holds on all " << c.trials << " trials";
    else
        v << "flow upper bound failed on " << (c.trials - ok) << " of " << c.trials << " trials";
    verdicts.push_back(v.str());
    return {{"n", n},
            {"constants",
             {{"l", used.l}, {"eps", used.eps}, {"h", used.h}, {"eta", used.eta},
              {"zeta", used.zeta}}},
            {"trials", rows},
            {"ok", ok}};
}

json run_ldp_rate(const RunConfig& c, std::vector<std::string>& verdicts) {
    ContinuousDomain dom = c.domain();
    RateSeries series =
        rate_series(dom, c.law, c.lambda, c.meshes, c.trials, c.seed, -1.0, c.workers);
    verdicts.push_back(series.verdict);
    if (!series.warning.empty()) verdicts.push_back(series.warning);
    return {{"series", json::parse(series.to_json())}};
}

json run_sum_tail(const RunConfig& c, std::vector<std::string>& verdicts) {
    SumTailEstimate est =
        sum_tail(c.alpha, c.beta, c.law, c.npow, c.trials, c.seed, c.workers);
    bool close = std::isfinite(est.log_p) && std::isfinite(est.cramer_log) &&
                 std::abs(est.log_p - est.cramer_log) <= 0.25 * std::abs(est.cramer_log);
    verdicts.push_back(close ? "log p_hat within 25% of the Cramer exponent"
                             : "log p_hat outside 25% of the Cramer exponent");
    return {{"estimate", json::parse(est.to_json())}};
}

}  // namespace

ContinuousDomain RunConfig::domain() const {
    if (domain_preset == "unit-box") return ContinuousDomain::unit_box(d);
    if (domain_preset == "inline") return ContinuousDomain::from_json(domain_json);
    throw std::invalid_argument("config: unknown domain preset \"" + domain_preset + "\"");
}

void RunConfig::validate() const {
    if (!known_kind(kind)) throw std::invalid_argument("config: unknown experiment kind \"" + kind + "\"");
    if (domain_preset != "unit-box" && domain_preset != "inline")
        throw std::invalid_argument("config: unknown domain preset \"" + domain_preset + "\"");
    if (d < 2) throw std::invalid_argument("config: dimension must be at least 2");
    law.validate();
    if (trials == 0) throw std::invalid_argument("config: trials must be positive");
    if (meshes.empty()) throw std::invalid_argument("config: meshes must be nonempty");
    for (int n : meshes)
        if (n < 2) throw std::invalid_argument("config: meshes must be at least 2");
    if (workers < 1) throw std::invalid_argument("config: workers must be at least 1");
    if (kind == "ldp-rate") {
        if (lambda <= 0.0) throw std::invalid_argument("config: ldp-rate needs lambda > 0");
        if (theta < 0.0) throw std::invalid_argument("config: theta must be nonnegative");
    }
    if (kind == "sum-tail") {
        if (alpha <= 0.0) throw std::invalid_argument("config: sum-tail needs alpha > 0");
        if (npow == 0) throw std::invalid_argument("config: sum-tail needs npow > 0");
        if (beta <= alpha * law.mean())
            throw std::invalid_argument("config: sum-tail is not a rare event (beta <= alpha * E[t])");
    }
    if (kind == "cutset-verify") {
        if (zeta < 2.0 * double(d))
            throw std::invalid_argument("config: cutset-verify needs zeta >= 2d");
        if (h <= 0.0 || eta <= 0.0 || l <= 0.0 || eps <= 0.0)
            throw std::invalid_argument("config: cutset-verify needs positive h, eta, l, eps");
    }
    if (kind == "estimate-nu") {
        for (const Vec& v : directions) {
            if (v.size() != d)
                throw std::invalid_argument("config: estimate-nu direction has wrong dimension");
            if (norm2(v) < 1e-12)
                throw std::invalid_argument("config: estimate-nu direction must be nonzero");
        }
    }
    if (kind == "phi-tilde" && nu_table_path.empty())
        throw std::invalid_argument("config: phi-tilde needs nu_table_path");
}

std::string RunConfig::to_json() const {
    json j;
    j["kind"] = kind;
    j["domain_preset"] = domain_preset;
    j["d"] = d;
    j["domain_json"] = domain_json;
    j["law"] = json::parse(law.to_json());
    j["meshes"] = meshes;
    j["trials"] = trials;
    j["zeta"] = zeta;
    j["h"] = h;
    j["eta"] = eta;
    j["l"] = l;
    j["eps"] = eps;
    j["s"] = s;
    j["lambda"] = lambda;
    j["theta"] = theta;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["npow"] = npow;
    j["directions"] = directions;
    j["nu_table_path"] = nu_table_path;
    j["seed"] = seed;
    j["workers"] = workers;
    j["out_dir"] = out_dir;
    return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    RunConfig c;
    c.kind = j.at("kind");
    if (j.contains("domain_preset")) c.domain_preset = j.at("domain_preset");
    if (j.contains("d")) c.d = j.at("d");
    if (j.contains("domain_json")) c.domain_json = j.at("domain_json");
    if (j.contains("law")) c.law = CapacityLaw::from_json(j.at("law").dump());
    if (j.contains("meshes")) c.meshes = j.at("meshes").get<std::vector<int>>();
    if (j.contains("trials")) c.trials = j.at("trials");
    if (j.contains("zeta")) c.zeta = j.at("zeta");
    if (j.contains("h")) c.h = j.at("h");
    if (j.contains("eta")) c.eta = j.at("eta");
    if (j.contains("l")) c.l = j.at("l");
    if (j.contains("eps")) c.eps = j.at("eps");
    if (j.contains("s")) c.s = j.at("s");
    if (j.contains("lambda")) c.lambda = j.at("lambda");
    if (j.contains("theta")) c.theta = j.at("theta");
    if (j.contains("alpha")) c.alpha = j.at("alpha");
    if (j.contains("beta")) c.beta = j.at("beta");
    if (j.contains("npow")) c.npow = j.at("npow");
    if (j.contains("directions")) c.directions = j.at("directions").get<std::vector<Vec>>();
    if (j.contains("nu_table_path")) c.nu_table_path = j.at("nu_table_path");
    if (j.contains("seed")) c.seed = j.at("seed");
    if (j.contains("workers")) c.workers = j.at("workers");
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir");
    return c;
}

RunConfig RunConfig::load(const std::string& path) { return from_json(read_file(path)); }

std::string RunConfig::hash() const { return fnv_hex(to_json()); }

RunArtifact run(const RunConfig& config) {
    config.validate();
    RunArtifact art;
    art.config_json = config.to_json();
    art.config_hash = config.hash();
    art.environment = environment_fingerprint();
    art.started = now_utc();
    json outputs;
    try {
        if (config.kind == "flow-sample")
            outputs = run_flow_sample(config);
        else if (config.kind == "estimate-nu")
            outputs = run_estimate_nu(config);
        else if (config.kind == "phi-tilde")
            outputs = run_phi_tilde(config, art.verdicts);
        else if (config.kind == "cutset-verify")
            outputs = run_cutset_verify(config, art.verdicts);
        else if (config.kind == "ldp-rate")
            outputs = run_ldp_rate(config, art.verdicts);
        else
            outputs = run_sum_tail(config, art.verdicts);
    } catch (const InfeasibleError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(config.kind + ": " + e.what());
    }
    art.outputs_json = outputs.dump(2);
    art.finished = now_utc();
    return art;
}

std::string RunArtifact::to_json() const {
    json j;
    j["config"] = json::parse(config_json);
    j["config_hash"] = config_hash;
    j["environment"] = environment;
    j["outputs"] = json::parse(outputs_json);
    j["verdicts"] = verdicts;
    return j.dump(2);
}

RunArtifact RunArtifact::from_json(const std::string& text) {
    json j = json::parse(text);
    RunArtifact a;
    a.config_json = j.at("config").dump(2);
    a.config_hash = j.at("config_hash");
    a.environment = j.at("environment");
    a.outputs_json = j.at("outputs").dump(2);
    a.verdicts = j.at("verdicts").get<std::vector<std::string>>();
    return a;
}

std::vector<ReportFile> report(const RunArtifact& artifact) {
    json cfg = json::parse(artifact.config_json);
    json out = json::parse(artifact.outputs_json);
    std::string kind = cfg.at("kind");
    std::vector<ReportFile> files;

    std::ostringstream csv;
    csv.precision(17);
    if (kind == "flow-sample") {
        csv << "n,trial,phi,phi_per_area\n";
        for (const auto& mesh : out.at("flows"))
            for (const auto& s : mesh.at("samples"))
                csv << mesh.at("n").get<int>() << ',' << s.at("trial").get<std::size_t>() << ','
                    << s.at("phi").get<double>() << ',' << s.at("phi_per_area").get<double>()
                    << '\n';
        files.push_back({"flows.csv", csv.str()});
    } else if (kind == "estimate-nu") {
        const json& table = out.at("nu_table");
        std::size_t d = cfg.at("d");
        csv << "vx,vy" << (d > 2 ? ",vz" : "") << ",n,mean,se,samples\n";
        for (const auto& e : table.at("entries")) {
            std::ostringstream dir;
            dir.precision(17);
            for (std::size_t i = 0; i < d; ++i)
                dir << (i ? "," : "") << e.at("v").at(i).get<double>();
            const auto& meshes = e.at("meshes");
            for (std::size_t i = 0; i < meshes.size(); ++i)
                csv << dir.str() << ',' << meshes.at(i).get<int>() << ','
                    << e.at("means").at(i).get<double>() << ','
                    << e.at("stderrs").at(i).get<double>() << ','
                    << e.at("counts").at(i).get<std::size_t>() << '\n';
        }
        files.push_back({"nu.csv", csv.str()});
        files.push_back({"nu_table.json", table.dump(2)});
    } else if (kind == "phi-tilde") {
        csv << "index,capacity,admissible\n";
        for (const auto& c : out.at("candidates"))
            csv << c.at("index").get<std::size_t>() << ',' << c.at("capacity").get<double>() << ','
                << (c.at("admissible").get<bool>() ? 1 : 0) << '\n';
        files.push_back({"candidates.csv", csv.str()});
    } else if (kind == "cutset-verify") {
        csv << "trial,phi_n,bound,holds,cutset_ok\n";
        for (const auto& t : out.at("trials"))
            csv << t.at("trial").get<std::size_t>() << ',' << t.at("phi_n").get<double>() << ','
                << t.at("bound").get<double>() << ',' << (t.at("holds").get<bool>() ? 1 : 0)
                << ',' << (t.at("cutset_ok").get<bool>() ? 1 : 0) << '\n';
        files.push_back({"trials.csv", csv.str()});
    } else if (kind == "ldp-rate") {
        csv << "n,p_hat,ci_lo,ci_hi,rate\n";
        for (const auto& e : out.at("series").at("estimates"))
            csv << e.at("n").get<int>() << ',' << e.at("p_hat").get<double>() << ','
                << e.at("ci_lo").get<double>() << ',' << e.at("ci_hi").get<double>() << ','
                << (e.at("rate").is_null() ? -std::numeric_limits<double>::infinity()
                                           : e.at("rate").get<double>())
                << '\n';
        files.push_back({"series.csv", csv.str()});
    } else if (kind == "sum-tail") {
        const json& e = out.at("estimate");
        csv << "alpha,beta,npow,trials,p_hat,ci_lo,ci_hi,log_p,cramer_log,theta\n";
        csv << e.at("alpha").get<double>() << ',' << e.at("beta").get<double>() << ','
            << e.at("npow").get<std::size_t>() << ',' << e.at("trials").get<std::size_t>() << ','
            << e.at("p_hat").get<double>() << ',' << e.at("ci_lo").get<double>() << ','
            << e.at("ci_hi").get<double>() << ','
            << (e.at("log_p").is_null() ? -std::numeric_limits<double>::infinity()
                                        : e.at("log_p").get<double>())
            << ','
            << (e.at("cramer_log").is_null() ? -std::numeric_limits<double>::infinity()
                                             : e.at("cramer_log").get<double>())
            << ',' << e.at("theta").get<double>() << '\n';
        files.push_back({"sum_tail.csv", csv.str()});
    }

    std::ostringstream sum;
    sum << "experiment: " << kind << '\n';
    sum << "config hash: " << artifact.config_hash << '\n';
    sum << "environment: " << artifact.environment << '\n';
    for (const auto& v : artifact.verdicts) sum << "verdict: " << v << '\n';
    for (const auto& f : files) sum << "file: " << f.name << '\n';
    files.push_back({"summary.txt", sum.str()});
    return files;
}

std::string write_run(const RunConfig& config, const RunArtifact& artifact) {
    std::filesystem::path dir =
        std::filesystem::path(config.out_dir) / ("run-" + artifact.config_hash);
    std::filesystem::create_directories(dir);
    write_file(dir / "config.json", config.to_json());
    write_file(dir / "artifact.json", artifact.to_json());
    json stamps;
    stamps["started"] = artifact.started;
    stamps["finished"] = artifact.finished;
    write_file(dir / "timestamps.json", stamps.dump(2));
    for (const ReportFile& f : report(artifact)) write_file(dir / f.name, f.contents);
    return dir.string();
}

}  // namespace fpp
