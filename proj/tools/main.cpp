// cybersir: Monte Carlo simulator and calibration toolkit for contagious
// cyber-episodes over a firm portfolio. Subcommands cover calibration of
// the contagion coefficients, scenario simulation with loss distributions,
// aggregate exceedance probability curves, synthetic data generation, and
// plot-ready summaries. Data only on files/stdout, diagnostics on stderr.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cybersir/calibration.hpp"
#include "cybersir/episode.hpp"
#include "cybersir/io.hpp"
#include "cybersir/portfolio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cybersir;

namespace {

struct RunConfig {
    std::uint64_t seed = 20240501;
    long horizon_days = 100;
    long n_scenarios = 10000;
    long n_outer = 10000;
    double upsilon = 0.105;
    double severity_alpha = 50.0;
    double severity_beta = 10.0;
    long initial_infected_subunits = 49;

    bool panel_new_infections = false;
    bool bootstrap_aep = false;
    bool zipf_mle = false;
    int substeps = 1;

    std::string portfolio_path = "portfolio.csv";
    std::string infections_path = "infections.csv";
    std::string revenues_path = "revenues.csv";
    std::string sector_rates_path = "sector_rates.csv";
    std::string theta_path = "theta.json";
    std::string output_dir = "out";

    std::vector<double> aep_thresholds;  // empty: automatic quantile grid

    // calibration settings
    long calib_scenarios = 100;
    int calib_starts = 8;
    int calib_iterations = 300;

    // fallback size law when no revenue panel is given
    double zipf_exponent = 1.759;
    double zipf_scale = 0.784;
    int zipf_max_size = 12;

    // synthetic data generation
    long synth_firms = 2000;
    long synth_years = 13;
    double synth_z0_low = 2.0;    // annual subunit revenue range, EUR millions
    double synth_z0_high = 15.0;
    std::vector<std::pair<double, double>> synth_z0_by_size;  // optional per-size override
    double synth_rho = 0.5;
    calibration::ThetaSpec synth_theta{0.4474, 0.0151, 0.3466, 0.6782, 0.5471, 14210.0};
};

json config_to_json(const RunConfig& c)
{
    json j;
    j["seed"] = c.seed;
    j["horizon_days"] = c.horizon_days;
    j["n_scenarios"] = c.n_scenarios;
    j["n_outer"] = c.n_outer;
    j["upsilon"] = c.upsilon;
    j["severity"] = {{"alpha", c.severity_alpha}, {"beta", c.severity_beta}};
    j["initial_infected_subunits"] = c.initial_infected_subunits;
    j["flags"] = {{"panel_new_infections", c.panel_new_infections},
                  {"bootstrap_aep", c.bootstrap_aep},
                  {"zipf_mle", c.zipf_mle},
                  {"substeps", c.substeps}};
    j["paths"] = {{"portfolio", c.portfolio_path},   {"infections", c.infections_path},
                  {"revenues", c.revenues_path},     {"sector_rates", c.sector_rates_path},
                  {"theta", c.theta_path},           {"output_dir", c.output_dir}};
    j["aep_thresholds"] = c.aep_thresholds;
    j["calibration"] = {{"n_scenarios", c.calib_scenarios},
                        {"n_starts", c.calib_starts},
                        {"max_iterations", c.calib_iterations}};
    j["zipf"] = {{"exponent", c.zipf_exponent}, {"scale", c.zipf_scale}, {"max_size", c.zipf_max_size}};
    json z0_by_size = json::array();
    for (const auto& [lo, hi] : c.synth_z0_by_size)
        z0_by_size.push_back({lo, hi});
    j["synth"] = {{"n_firms", c.synth_firms},
                  {"years", c.synth_years},
                  {"z0_range", {c.synth_z0_low, c.synth_z0_high}},
                  {"z0_range_by_size", z0_by_size},
                  {"rho", c.synth_rho},
                  {"theta",
                   {{"kappa_a", c.synth_theta.kappa_a},
                    {"sigma_a", c.synth_theta.sigma_a},
                    {"a0_tilde", c.synth_theta.a0},
                    {"gamma1_0", c.synth_theta.gamma1_0},
                    {"beta1_0", c.synth_theta.beta1_0},
                    {"h_star", c.synth_theta.h_star}}}};
    return j;
}

void config_from_json(const json& j, RunConfig& c)
{
    c.seed = j.value("seed", c.seed);
    c.horizon_days = j.value("horizon_days", c.horizon_days);
    c.n_scenarios = j.value("n_scenarios", c.n_scenarios);
    c.n_outer = j.value("n_outer", c.n_outer);
    c.upsilon = j.value("upsilon", c.upsilon);
    if (j.contains("severity")) {
        c.severity_alpha = j["severity"].value("alpha", c.severity_alpha);
        c.severity_beta = j["severity"].value("beta", c.severity_beta);
    }
    c.initial_infected_subunits = j.value("initial_infected_subunits", c.initial_infected_subunits);
    if (j.contains("flags")) {
        const json& f = j["flags"];
        c.panel_new_infections = f.value("panel_new_infections", c.panel_new_infections);
        c.bootstrap_aep = f.value("bootstrap_aep", c.bootstrap_aep);
        c.zipf_mle = f.value("zipf_mle", c.zipf_mle);
        c.substeps = f.value("substeps", c.substeps);
    }
    if (j.contains("paths")) {
        const json& p = j["paths"];
        c.portfolio_path = p.value("portfolio", c.portfolio_path);
        c.infections_path = p.value("infections", c.infections_path);
        c.revenues_path = p.value("revenues", c.revenues_path);
        c.sector_rates_path = p.value("sector_rates", c.sector_rates_path);
        c.theta_path = p.value("theta", c.theta_path);
        c.output_dir = p.value("output_dir", c.output_dir);
    }
    if (j.contains("aep_thresholds"))
        c.aep_thresholds = j["aep_thresholds"].get<std::vector<double>>();
    if (j.contains("calibration")) {
        const json& k = j["calibration"];
        c.calib_scenarios = k.value("n_scenarios", c.calib_scenarios);
        c.calib_starts = k.value("n_starts", c.calib_starts);
        c.calib_iterations = k.value("max_iterations", c.calib_iterations);
    }
    if (j.contains("zipf")) {
        const json& z = j["zipf"];
        c.zipf_exponent = z.value("exponent", c.zipf_exponent);
        c.zipf_scale = z.value("scale", c.zipf_scale);
        c.zipf_max_size = z.value("max_size", c.zipf_max_size);
    }
    if (j.contains("synth")) {
        const json& s = j["synth"];
        c.synth_firms = s.value("n_firms", c.synth_firms);
        c.synth_years = s.value("years", c.synth_years);
        if (s.contains("z0_range")) {
            c.synth_z0_low = s["z0_range"].at(0).get<double>();
            c.synth_z0_high = s["z0_range"].at(1).get<double>();
        }
        if (s.contains("z0_range_by_size")) {
            c.synth_z0_by_size.clear();
            for (const auto& pair : s["z0_range_by_size"])
                c.synth_z0_by_size.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
        }
        c.synth_rho = s.value("rho", c.synth_rho);
        if (s.contains("theta")) {
            const json& t = s["theta"];
            c.synth_theta.kappa_a = t.value("kappa_a", c.synth_theta.kappa_a);
            c.synth_theta.sigma_a = t.value("sigma_a", c.synth_theta.sigma_a);
            c.synth_theta.a0 = t.value("a0_tilde", c.synth_theta.a0);
            c.synth_theta.gamma1_0 = t.value("gamma1_0", c.synth_theta.gamma1_0);
            c.synth_theta.beta1_0 = t.value("beta1_0", c.synth_theta.beta1_0);
            c.synth_theta.h_star = t.value("h_star", c.synth_theta.h_star);
        }
    }
}

std::string out_path(const RunConfig& cfg, const std::string& name)
{
    fs::create_directories(cfg.output_dir);
    return (fs::path(cfg.output_dir) / name).string();
}

firmmodel::ZipfSpec config_zipf(const RunConfig& cfg)
{
    return {cfg.zipf_exponent, cfg.zipf_scale, cfg.zipf_max_size};
}

episode::EpisodeParams make_episode_params(const RunConfig& cfg, const io::ThetaDocument& doc)
{
    episode::EpisodeParams params{doc.theta.gamma_spec(),
                                  doc.theta.beta_spec(),
                                  doc.theta.attack_spec(),
                                  {},
                                  {},
                                  stochproc::TimeGrid(0.0, static_cast<double>(cfg.horizon_days), 1.0),
                                  cfg.substeps,
                                  cfg.severity_alpha,
                                  cfg.severity_beta};
    const std::vector<long> pops = calibration::allocate_populations(doc.theta.h_star, doc.zipf);
    params.populations.assign(pops.begin(), pops.end());
    params.initial_infected =
        sir::allocate_initial_infected(cfg.initial_infected_subunits, params.populations);
    return params;
}

// ---------------------------------------------------------------- calibrate

int cmd_calibrate(const RunConfig& cfg)
{
    const calibration::InfectionPanel panel = io::read_infections_csv(cfg.infections_path);

    firmmodel::ZipfSpec zipf = config_zipf(cfg);
    if (fs::exists(cfg.revenues_path)) {
        const auto revenues = io::read_revenues_csv(cfg.revenues_path);
        const auto firms = calibration::build_firm_proxy(revenues);
        std::vector<int> sizes;
        sizes.reserve(firms.size());
        int max_size = static_cast<int>(panel.sizes());
        for (const auto& f : firms)
            max_size = std::max(max_size, static_cast<int>(f.size()));
        for (const auto& f : firms)
            sizes.push_back(static_cast<int>(f.size()));
        zipf = calibration::fit_zipf(sizes, max_size,
                                     cfg.zipf_mle ? calibration::ZipfFitMethod::max_likelihood
                                                  : calibration::ZipfFitMethod::least_squares);
        std::cerr << "calibrate: size law from " << firms.size() << " firms: exponent "
                  << zipf.exponent << ", scale " << zipf.scale << "\n";
    } else {
        std::cerr << "calibrate: no revenue panel at " << cfg.revenues_path
                  << ", using configured size law\n";
    }

    calibration::CalibrationConfig ccfg;
    ccfg.n_scenarios = static_cast<std::size_t>(cfg.calib_scenarios);
    ccfg.n_starts = cfg.calib_starts;
    ccfg.max_iterations = cfg.calib_iterations;
    ccfg.semantics = cfg.panel_new_infections ? calibration::PanelSemantics::new_infections
                                              : calibration::PanelSemantics::current_infected;

    RngStream rng(cfg.seed, 0);
    const calibration::CalibrationResult result = calibration::calibrate(panel, zipf, ccfg, rng);

    io::ThetaDocument doc;
    doc.theta = result.theta;
    doc.zipf = zipf;
    doc.j2 = result.j2;
    doc.converged = result.converged;
    doc.evaluations = result.evaluations;
    doc.seed = cfg.seed;
    io::write_theta_json(cfg.theta_path, doc);

    std::cerr << "calibrate: J2 " << result.j2 << " after " << result.evaluations
              << " evaluations, converged " << (result.converged ? "yes" : "no") << "\n";
    std::cerr << "calibrate: theta kappa " << result.theta.kappa_a << " sigma "
              << result.theta.sigma_a << " a0 " << result.theta.a0 << " gamma1 "
              << result.theta.gamma1_0 << " beta1 " << result.theta.beta1_0 << " h* "
              << result.theta.h_star << "\n";
    return result.converged ? 0 : 2;
}

// ----------------------------------------------------------------- simulate

int cmd_simulate(const RunConfig& cfg)
{
    const io::ThetaDocument doc = io::read_theta_json(cfg.theta_path);
    const std::vector<firmmodel::Firm> firms = io::read_portfolio_csv(cfg.portfolio_path);
    const episode::EpisodeParams params = make_episode_params(cfg, doc);
    const episode::EpisodeSimulator sim(params, firms);

    const auto days = static_cast<std::size_t>(cfg.horizon_days);
    const std::size_t kk = params.populations.size();
    const auto n_scen = static_cast<std::size_t>(cfg.n_scenarios);
    double h_total = 0.0;
    for (double h : params.populations)
        h_total += h;

    std::vector<double> mean_s(kk * (days + 1), 0.0);
    std::vector<double> mean_i(kk * (days + 1), 0.0);
    std::vector<double> mean_r(kk * (days + 1), 0.0);
    std::vector<double> mean_y(days + 1, 0.0);
    std::vector<std::vector<double>> daily_losses(n_scen);
    std::vector<double> totals(n_scen);

    // no-infection counts and infection-day sums per firm size
    const std::size_t max_firm_size = [&] {
        std::size_t m = 1;
        for (const auto& f : firms)
            m = std::max(m, f.size());
        return m;
    }();
    std::vector<long> firms_of_size(max_firm_size, 0);
    for (const auto& f : firms)
        firms_of_size[f.size() - 1] += 1;
    std::vector<double> no_infection(max_firm_size, 0.0);
    std::vector<double> tau_sum(max_firm_size, 0.0);
    std::vector<long> tau_count(max_firm_size, 0);

    // per-subunit running sum of severity * 1{active at t} for the output curve
    std::vector<std::size_t> subunit_offset(firms.size());
    std::size_t n_subunits = 0;
    for (std::size_t i = 0; i < firms.size(); ++i) {
        subunit_offset[i] = n_subunits;
        n_subunits += firms[i].size();
    }
    std::vector<double> hit_sum(n_subunits * (days + 1), 0.0);

    const RngStream master(cfg.seed, 0);
    const double horizon_end = static_cast<double>(cfg.horizon_days);
    for (std::size_t m = 0; m < n_scen; ++m) {
        episode::ScenarioOutcome out = sim.simulate(master.substream(m), true);
        for (std::size_t u = 0; u <= days; ++u) {
            mean_y[u] += out.trajectory.force[u];
            for (std::size_t k = 0; k < kk; ++k) {
                mean_s[u * kk + k] += out.trajectory.states[u].s[k];
                mean_i[u * kk + k] += out.trajectory.states[u].i[k];
                mean_r[u * kk + k] += out.trajectory.states[u].r[k];
            }
        }
        for (std::size_t i = 0; i < firms.size(); ++i) {
            const auto& rec = out.records[i];
            const std::size_t k = firms[i].size() - 1;
            if (rec.firm_tau > horizon_end) {
                no_infection[k] += 1.0;
            } else {
                tau_sum[k] += rec.firm_tau;
                tau_count[k] += 1;
            }
            for (std::size_t j = 0; j < firms[i].size(); ++j) {
                if (rec.tau[j] > horizon_end)
                    continue;
                const auto u_from = static_cast<std::size_t>(std::max(0.0, std::ceil(rec.tau[j])));
                const auto u_to = static_cast<std::size_t>(
                    std::min(static_cast<double>(days), std::ceil(rec.tau[j] + rec.delta[j]) - 1.0));
                for (std::size_t u = u_from; u <= u_to; ++u)
                    if (static_cast<double>(u) < rec.tau[j] + rec.delta[j])
                        hit_sum[(subunit_offset[i] + j) * (days + 1) + u] += rec.severity[j];
            }
        }
        daily_losses[m] = out.daily_loss;
        totals[m] = out.total_loss;
    }

    const double inv_m = 1.0 / static_cast<double>(n_scen);

    // mean trajectory, fractions and force per day and size
    std::vector<std::vector<double>> traj_rows;
    for (std::size_t u = 0; u <= days; ++u)
        for (std::size_t k = 0; k < kk; ++k)
            traj_rows.push_back({static_cast<double>(u), static_cast<double>(k + 1),
                                 mean_s[u * kk + k] * inv_m, mean_i[u * kk + k] * inv_m,
                                 mean_r[u * kk + k] * inv_m, mean_y[u] * inv_m});
    io::write_table_csv(out_path(cfg, "trajectory.csv"),
                        "mean over scenarios; S,I,R are fractions of all firms, Y per day",
                        {"day", "k", "S", "I", "R", "Y"}, traj_rows);

    // peak of the mean trajectory
    double peak_value = 0.0;
    std::size_t peak_day = 0;
    for (std::size_t u = 0; u <= days; ++u) {
        double subunits = 0.0;
        for (std::size_t k = 0; k < kk; ++k)
            subunits += static_cast<double>(k + 1) * mean_i[u * kk + k] * inv_m * h_total;
        if (subunits > peak_value) {
            peak_value = subunits;
            peak_day = u;
        }
    }
    std::cerr << "simulate: mean-trajectory peak " << peak_value << " infected subunits on day "
              << peak_day << "\n";

    std::vector<std::vector<double>> loss_rows;
    loss_rows.reserve(n_scen * days);
    for (std::size_t m = 0; m < n_scen; ++m)
        for (std::size_t u = 0; u < days; ++u)
            loss_rows.push_back(
                {static_cast<double>(u), static_cast<double>(m), daily_losses[m][u]});
    io::write_table_csv(out_path(cfg, "losses_daily.csv"), "losses in EUR millions",
                        {"day", "scenario", "loss"}, loss_rows);

    const portfolio::LossDistribution dist(totals);
    std::vector<std::vector<double>> cdf_rows;
    const auto& xs = dist.samples();
    for (std::size_t i = 0; i < xs.size(); ++i)
        cdf_rows.push_back({xs[i], static_cast<double>(i + 1) / static_cast<double>(xs.size())});
    io::write_table_csv(out_path(cfg, "cdf.csv"),
                        "episode-total losses in EUR millions, empirical CDF",
                        {"x", "F"}, cdf_rows);

    std::vector<std::vector<double>> out_rows;
    for (std::size_t u = 0; u <= days; ++u) {
        double total = 0.0;
        for (std::size_t i = 0; i < firms.size(); ++i)
            for (std::size_t j = 0; j < firms[i].size(); ++j) {
                const double hit = hit_sum[(subunit_offset[i] + j) * (days + 1) + u] * inv_m;
                total += firms[i].subunits[j].z0 *
                         std::exp(firms[i].subunits[j].drift * static_cast<double>(u)) *
                         (1.0 - hit);
            }
        out_rows.push_back({static_cast<double>(u), total});
    }
    io::write_table_csv(out_path(cfg, "output.csv"),
                        "expected portfolio output in EUR millions per day",
                        {"day", "expected_output"}, out_rows);

    std::vector<std::vector<double>> tau_rows;
    for (std::size_t k = 0; k < max_firm_size; ++k) {
        if (firms_of_size[k] == 0)
            continue;
        const double denom = static_cast<double>(firms_of_size[k]) * static_cast<double>(n_scen);
        tau_rows.push_back({static_cast<double>(k + 1), no_infection[k] / denom,
                            tau_count[k] > 0 ? tau_sum[k] / static_cast<double>(tau_count[k]) : -1.0});
    }
    io::write_table_csv(out_path(cfg, "infection_times.csv"),
                        "per firm size: P(no infection by horizon), mean infection day",
                        {"size", "p_no_infection", "mean_tau"}, tau_rows);

    std::cerr << "simulate: " << n_scen << " scenarios, mean episode loss " << dist.mean()
              << " MEUR, max " << dist.max() << " MEUR\n";
    return 0;
}

// ---------------------------------------------------------------------- aep

int cmd_aep(const RunConfig& cfg)
{
    const io::ThetaDocument doc = io::read_theta_json(cfg.theta_path);
    const std::vector<firmmodel::Firm> firms = io::read_portfolio_csv(cfg.portfolio_path);
    const episode::EpisodeParams params = make_episode_params(cfg, doc);
    const episode::EpisodeSimulator sim(params, firms);

    const RngStream master(cfg.seed, 0);
    const auto n_outer = static_cast<std::size_t>(cfg.n_outer);

    // episode-count bookkeeping for the run log
    std::map<long, long> episode_counts;

    // exact compound totals, resimulated per Algorithm-style outer loop,
    // or bootstrap from a pool when configured
    std::vector<double> pool;
    if (cfg.bootstrap_aep) {
        const auto pool_size = static_cast<std::size_t>(std::max<long>(cfg.n_scenarios, 100));
        pool.reserve(pool_size);
        const RngStream pool_rng = master.substream(0xB00);
        for (std::size_t m = 0; m < pool_size; ++m) {
            RngStream rng = pool_rng.substream(m);
            pool.push_back(sim.exact_loss(rng));
        }
        std::cerr << "aep: bootstrap pool of " << pool.size() << " episode losses\n";
    }

    std::vector<double> exact_totals(n_outer, 0.0);
    double max_single = 0.0;
    {
        const RngStream outer_base = master.substream(0xAE1);
        for (std::size_t m = 0; m < n_outer; ++m) {
            RngStream outer = outer_base.substream(m);
            const long episodes = outer.poisson(cfg.upsilon);
            episode_counts[episodes] += 1;
            double total = 0.0;
            for (long l = 0; l < episodes; ++l) {
                RngStream inner = outer.substream(static_cast<std::uint64_t>(l) + 1);
                double loss;
                if (cfg.bootstrap_aep) {
                    const auto idx = static_cast<std::size_t>(inner.uniform() *
                                                              static_cast<double>(pool.size()));
                    loss = pool[std::min(idx, pool.size() - 1)];
                } else {
                    loss = sim.exact_loss(inner);
                }
                total += loss;
                max_single = std::max(max_single, loss);
            }
            exact_totals[m] = total;
        }
    }

    std::vector<double> approx_totals(n_outer, 0.0);
    {
        const RngStream outer_base = master.substream(0xAE2);
        for (std::size_t m = 0; m < n_outer; ++m) {
            RngStream outer = outer_base.substream(m);
            const long episodes = outer.poisson(cfg.upsilon);
            double total = 0.0;
            for (long l = 0; l < episodes; ++l) {
                RngStream inner = outer.substream(static_cast<std::uint64_t>(l) + 1);
                total += sim.approx_loss(inner);
            }
            approx_totals[m] = total;
        }
    }

    std::vector<double> thresholds = cfg.aep_thresholds;
    if (thresholds.empty()) {
        double hi = 0.0;
        for (double t : exact_totals)
            hi = std::max(hi, t);
        for (double t : approx_totals)
            hi = std::max(hi, t);
        if (hi <= 0.0)
            hi = 1.0;
        const int n_grid = 80;
        for (int i = 0; i <= n_grid; ++i)
            thresholds.push_back(hi * static_cast<double>(i) / static_cast<double>(n_grid));
    }

    auto exceed_fraction = [&](const std::vector<double>& totals, double x) {
        std::size_t n = 0;
        for (double t : totals)
            if (t > x)
                ++n;
        return static_cast<double>(n) / static_cast<double>(totals.size());
    };

    std::vector<std::vector<double>> rows;
    for (double x : thresholds)
        rows.push_back({x, exceed_fraction(exact_totals, x), exceed_fraction(approx_totals, x)});
    io::write_table_csv(out_path(cfg, "aep.csv"), "thresholds in EUR millions",
                        {"x", "AEP_exact", "AEP_approx"}, rows);

    // signed gap of the idiosyncratic-free approximation in the upper decile
    // (reported, not asserted; the approximation tends to understate the
    // most extreme events)
    {
        std::vector<double> positive;
        for (double t : exact_totals)
            if (t > 0.0)
                positive.push_back(t);
        if (!positive.empty()) {
            std::sort(positive.begin(), positive.end());
            const double q90 = positive[static_cast<std::size_t>(0.9 * (positive.size() - 1))];
            double gap = 0.0;
            int count = 0;
            for (const auto& row : rows) {
                if (row[0] >= q90) {
                    gap += row[2] - row[1];
                    ++count;
                }
            }
            if (count > 0)
                std::cerr << "aep: mean signed gap (approx - exact) above the upper decile: "
                          << gap / count << "\n";
        }
    }

    std::cerr << "aep: episode count distribution over " << n_outer << " draws:";
    for (const auto& [count, times] : episode_counts)
        std::cerr << " P(P=" << count << ")=" << static_cast<double>(times) / static_cast<double>(n_outer);
    std::cerr << "\n";
    std::cerr << "aep: max single-episode loss " << max_single << " MEUR, max compound total "
              << *std::max_element(exact_totals.begin(), exact_totals.end()) << " MEUR\n";
    return 0;
}

// ---------------------------------------------------------------------- cdf

int cmd_cdf(const RunConfig& cfg, long day)
{
    const std::string losses = out_path(cfg, "losses_daily.csv");
    std::ifstream in(losses);
    if (!in)
        throw io::SchemaError(losses, 0, "run 'simulate' first");
    in.close();

    // losses_daily.csv: day, scenario, loss
    std::map<long, double> totals_by_scenario;
    {
        std::ifstream f(losses);
        std::string line;
        bool header = false;
        while (std::getline(f, line)) {
            if (line.empty() || line.front() == '#')
                continue;
            if (!header) {
                header = true;
                continue;
            }
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            const long u = std::stol(line.substr(0, c1));
            const long m = std::stol(line.substr(c1 + 1, c2 - c1 - 1));
            const double loss = std::stod(line.substr(c2 + 1));
            if (day < 0 || u == day)
                totals_by_scenario[m] += loss;
        }
    }
    if (totals_by_scenario.empty())
        throw io::SchemaError(losses, 0, "no rows for requested day");

    std::vector<double> samples;
    samples.reserve(totals_by_scenario.size());
    for (const auto& [m, loss] : totals_by_scenario)
        samples.push_back(loss);
    const portfolio::LossDistribution dist(std::move(samples));

    std::vector<std::vector<double>> rows;
    const auto& xs = dist.samples();
    for (std::size_t i = 0; i < xs.size(); ++i)
        rows.push_back({xs[i], static_cast<double>(i + 1) / static_cast<double>(xs.size())});
    const std::string name = day < 0 ? "cdf.csv" : ("cdf_day" + std::to_string(day) + ".csv");
    io::write_table_csv(out_path(cfg, name), "losses in EUR millions, empirical CDF", {"x", "F"},
                        rows);
    std::cerr << "cdf: " << xs.size() << " scenarios, day " << (day < 0 ? -1 : day) << "\n";
    return 0;
}

// ------------------------------------------------------------------- report

int cmd_report(const RunConfig& cfg)
{
    const std::string losses = out_path(cfg, "losses_daily.csv");
    std::ifstream f(losses);
    if (!f)
        throw io::SchemaError(losses, 0, "run 'simulate' first");

    std::map<long, std::vector<double>> by_day;
    std::string line;
    bool header = false;
    while (std::getline(f, line)) {
        if (line.empty() || line.front() == '#')
            continue;
        if (!header) {
            header = true;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const long u = std::stol(line.substr(0, c1));
        const double loss = std::stod(line.substr(c2 + 1));
        by_day[u].push_back(loss);
    }
    if (by_day.empty())
        throw io::SchemaError(losses, 0, "no data rows");

    std::vector<std::vector<double>> rows;
    for (auto& [day, samples] : by_day) {
        const portfolio::LossDistribution dist(std::move(samples));
        const portfolio::DistributionSummary s = portfolio::distribution_summary(dist);
        rows.push_back({static_cast<double>(day), s.lower, s.upper, s.mode, s.mean});
    }
    io::write_table_csv(out_path(cfg, "report.csv"), "daily loss distribution in EUR millions",
                        {"day", "lower", "upper", "mode", "mean"}, rows);
    std::cerr << "report: " << rows.size() << " days summarized\n";
    return 0;
}

// -------------------------------------------------------------------- synth

int cmd_synth(const RunConfig& cfg)
{
    cfg.synth_theta.validate();
    if (cfg.synth_firms < 1 || cfg.synth_years < 3)
        throw std::invalid_argument("synth: need n_firms >= 1 and years >= 3");
    if (!(cfg.synth_z0_low > 0.0) || cfg.synth_z0_high < cfg.synth_z0_low)
        throw std::invalid_argument("synth: invalid z0 range");

    const firmmodel::ZipfSpec zipf = config_zipf(cfg);
    const RngStream master(cfg.seed, 1);

    // firm panel: sizes from the Zipf law, annual revenues from GBM
    RngStream rng_sizes = master.substream(1);
    const std::vector<int> sizes =
        firmmodel::sample_firm_sizes(zipf, static_cast<std::size_t>(cfg.synth_firms), rng_sizes);

    std::vector<calibration::RevenueSeries> revenues;
    revenues.reserve(sizes.size());
    RngStream rng_rev = master.substream(2);
    const stochproc::TimeGrid years_grid(0.0, static_cast<double>(cfg.synth_years - 1), 1.0);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        calibration::RevenueSeries row;
        row.firm_id = "F" + std::to_string(i + 1);
        row.sector = "Synthetic";
        double lo = cfg.synth_z0_low, hi = cfg.synth_z0_high;
        const auto size_idx = static_cast<std::size_t>(sizes[i] - 1);
        if (size_idx < cfg.synth_z0_by_size.size()) {
            lo = cfg.synth_z0_by_size[size_idx].first;
            hi = cfg.synth_z0_by_size[size_idx].second;
            if (!(lo > 0.0) || hi < lo)
                throw std::invalid_argument("synth: invalid z0_range_by_size entry");
        }
        const double z0_annual = lo + rng_rev.uniform() * (hi - lo);
        const double mu_year = 0.02 + 0.06 * rng_rev.uniform();
        const double sigma_year = 0.05 + 0.25 * rng_rev.uniform();
        std::vector<double> shocks(years_grid.steps());
        for (auto& s : shocks)
            s = rng_rev.normal();
        row.by_year = stochproc::gbm_path(z0_annual * static_cast<double>(sizes[i]), mu_year,
                                          sigma_year, years_grid, shocks);
        revenues.push_back(std::move(row));
    }
    io::write_revenues_csv(cfg.revenues_path, revenues);

    // portfolio with the generator's true sizes and coefficients
    std::vector<firmmodel::Firm> firms;
    firms.reserve(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        firmmodel::Firm firm;
        firm.id = revenues[i].firm_id;
        firm.sector = revenues[i].sector;
        firm.rho = sizes[i] > 1 ? cfg.synth_rho : 0.0;
        const calibration::BsEstimate bs = calibration::estimate_bs(revenues[i].by_year);
        const double z0_daily =
            revenues[i].by_year.back() / static_cast<double>(sizes[i]) / 365.0;
        firm.subunits.assign(static_cast<std::size_t>(sizes[i]),
                             firmmodel::Subunit{z0_daily, bs.mu_daily,
                                                std::max(bs.sigma_daily, 1e-8)});
        firms.push_back(std::move(firm));
    }
    io::write_portfolio_csv(cfg.portfolio_path, firms);

    // infection panel: one simulated trajectory under the generator theta
    const std::vector<long> pops = calibration::allocate_populations(cfg.synth_theta.h_star, zipf);
    std::vector<double> popsd(pops.begin(), pops.end());
    const std::vector<long> infected0 =
        sir::allocate_initial_infected(cfg.initial_infected_subunits, popsd);
    const sir::SirState init = sir::initial_state(popsd, infected0);
    const stochproc::TimeGrid grid(0.0, static_cast<double>(cfg.horizon_days), 1.0);

    RngStream rng_panel = master.substream(4);
    const auto daily = episode::parameter_paths(cfg.synth_theta.gamma_spec(),
                                                cfg.synth_theta.beta_spec(),
                                                cfg.synth_theta.attack_spec(), popsd.size(), grid,
                                                rng_panel);
    const sir::SirTrajectory traj = sir::simulate_sir(init, daily, grid, cfg.substeps);

    double h_total = 0.0;
    for (double h : popsd)
        h_total += h;
    calibration::InfectionPanel panel;
    panel.counts.assign(grid.points(), std::vector<long>(popsd.size(), 0));
    for (std::size_t u = 0; u < grid.points(); ++u)
        for (std::size_t k = 0; k < popsd.size(); ++k)
            panel.counts[u][k] =
                std::llround(traj.states[u].i[k] * h_total);
    io::write_infections_csv(cfg.infections_path, panel);

    std::cerr << "synth: wrote " << firms.size() << " firms, " << grid.points()
              << " panel days\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo simulator and calibration toolkit for contagious cyber-episodes"};
    app.require_subcommand(0, 1);

    std::string config_path;
    bool print_config = false;
    RunConfig cfg;

    app.add_option("--config", config_path, "JSON configuration file");
    app.add_flag("--print-config", print_config, "print the effective configuration and exit");
    auto* seed_opt = app.add_option("--seed", cfg.seed, "master seed");
    auto* scen_opt = app.add_option("--scenarios", cfg.n_scenarios, "Monte Carlo scenarios M");
    auto* outer_opt = app.add_option("--outer", cfg.n_outer, "AEP replications M_P");
    auto* ups_opt = app.add_option("--upsilon", cfg.upsilon, "episode rate per horizon");

    CLI::App* sub_calibrate = app.add_subcommand("calibrate", "fit the contagion coefficients");
    CLI::App* sub_simulate = app.add_subcommand("simulate", "simulate scenarios and losses");
    CLI::App* sub_cdf = app.add_subcommand("cdf", "empirical loss CDF from simulated losses");
    CLI::App* sub_aep = app.add_subcommand("aep", "aggregate exceedance probability curves");
    CLI::App* sub_synth = app.add_subcommand("synth", "generate synthetic input data");
    CLI::App* sub_report = app.add_subcommand("report", "daily loss distribution summaries");

    long cdf_day = -1;
    sub_cdf->add_option("--day", cdf_day, "day index, -1 for episode totals");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot open config file " << config_path << "\n";
                return 1;
            }
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                std::cerr << "error: " << config_path << ": invalid JSON: " << e.what() << "\n";
                return 1;
            }
            RunConfig file_cfg;
            config_from_json(j, file_cfg);
            // command line overrides the file
            if (!seed_opt->empty())
                file_cfg.seed = cfg.seed;
            if (!scen_opt->empty())
                file_cfg.n_scenarios = cfg.n_scenarios;
            if (!outer_opt->empty())
                file_cfg.n_outer = cfg.n_outer;
            if (!ups_opt->empty())
                file_cfg.upsilon = cfg.upsilon;
            cfg = file_cfg;
        }

        if (cfg.n_scenarios < 1 || cfg.n_outer < 1 || cfg.horizon_days < 1)
            throw std::invalid_argument("config: n_scenarios, n_outer, horizon_days must be >= 1");
        if (!(cfg.severity_alpha > 0.0) || !(cfg.severity_beta > 0.0))
            throw std::invalid_argument("config: severity shapes must be > 0");
        if (cfg.upsilon < 0.0)
            throw std::invalid_argument("config: upsilon must be >= 0");

        if (print_config) {
            std::cout << config_to_json(cfg).dump(2) << "\n";
            return 0;
        }

        if (sub_calibrate->parsed())
            return cmd_calibrate(cfg);
        if (sub_simulate->parsed())
            return cmd_simulate(cfg);
        if (sub_cdf->parsed())
            return cmd_cdf(cfg, cdf_day);
        if (sub_aep->parsed())
            return cmd_aep(cfg);
        if (sub_synth->parsed())
            return cmd_synth(cfg);
        if (sub_report->parsed())
            return cmd_report(cfg);

        std::cerr << app.help() << "\n";
        return 1;
    } catch (const io::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
