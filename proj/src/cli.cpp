#include "nfbm/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "nfbm/covariance.hpp"
#include "nfbm/equivalence.hpp"
#include "nfbm/errors.hpp"
#include "nfbm/io.hpp"
#include "nfbm/prediction.hpp"
#include "nfbm/simulation.hpp"

namespace nfbm {

namespace {

constexpr const char* kOutDirEnv = "NFBM_OUT_DIR";

struct RunConfig {
    int n = 1;
    double H = 0.5;
    double T = 1.0;
    int m = 1024;
    int fig_m = 4096;
    std::uint64_t seed = 0;
    int paths = 1;
    std::string method = "volterra";
    std::string mode = "mg";
    double u = 0.5;
    int window = 0;
    int grid = 8;
    std::string out;
    std::string format = "csv";
    int threads = 0;
    std::string in;
    std::string increments;
    std::string kernel;
    double drift = 0.0;
    double beta = 0.0;
};

// Usage problems found after parsing; exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

NormalizationMode parse_mode(const std::string& s) { return s == "mvn" ? NormalizationMode::MVN_PERRIN : NormalizationMode::MG_UNIT; }

HurstOrder order_of(const RunConfig& c) { return HurstOrder(c.n, c.H); }

// Resolves --out, falling back to $NFBM_OUT_DIR/<default_name>, then stdout.
class Output {
public:
    Output(const std::string& out, const std::string& default_name, std::ostream& fallback) : os_(&fallback) {
        std::string path = out;
        if (path.empty()) {
            if (const char* dir = std::getenv(kOutDirEnv); dir && *dir)
                path = (std::filesystem::path(dir) / default_name).string();
        }
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::ios_base::failure("cannot write " + path);
            os_ = &file_;
            path_ = path;
        }
    }
    std::ostream& stream() { return *os_; }
    void close() {
        if (file_.is_open()) {
            file_.close();
            if (!file_) throw std::ios_base::failure("write failed for " + path_);
        } else {
            os_->flush();
        }
    }

private:
    std::ofstream file_;
    std::ostream* os_;
    std::string path_;
};

// Path CSV (t,value) back to a SamplePath on a uniform grid starting at 0.
SamplePath read_path(const std::string& file, const HurstOrder& ho) {
    const io::Table tab = io::read_csv_file(file);
    const int ct = tab.column("t"), cv = tab.column("value");
    if (tab.rows.size() < 3) throw ValidationError("path file needs at least 3 rows");
    SamplePath p;
    const int m = int(tab.rows.size()) - 1;
    p.grid = Grid(tab.rows.back()[ct], m);
    p.ho = ho;
    p.values.resize(m + 1);
    for (int i = 0; i <= m; ++i) {
        if (std::abs(tab.rows[i][ct] - p.grid.at(i)) > 1e-9 * p.grid.T)
            throw ValidationError("path file is not on a uniform grid starting at 0");
        p.values[i] = tab.rows[i][cv];
    }
    if (p.values[0] != 0.0) throw ValidationError("path file must start at value 0");
    return p;
}

SamplePath simulate_one(const RunConfig& c, const HurstOrder& ho, const Grid& grid, std::uint64_t stream) {
    RngStream rng(c.seed, stream);
    if (c.method == "volterra") return simulate_volterra(ho, grid, rng);
    if (c.method == "cholesky") return simulate_cholesky(ho, grid, rng, parse_mode(c.mode));
    SamplePath p = simulate_fgn_fft(ho.base(), grid, rng);
    for (int k = 1; k < ho.n; ++k) p = integrate_path(p);
    return p;
}

void cmd_simulate(const RunConfig& c, std::ostream& out) {
    const HurstOrder ho = order_of(c);
    const Grid grid(c.T, c.m);
    std::vector<SamplePath> paths(c.paths);
    parallel_for(c.paths, c.threads, [&](int i) { paths[i] = simulate_one(c, ho, grid, std::uint64_t(i)); });
    Output o(c.out, c.format == "svg" ? "simulate.svg" : "simulate.csv", out);
    if (c.format == "svg") {
        std::vector<io::SvgSeries> s;
        for (const auto& p : paths) s.push_back({grid.points(), p.values});
        io::write_svg(o.stream(), "order " + std::to_string(ho.n) + ", H = " + io::format_double(ho.H), s);
    } else if (c.paths == 1) {
        io::write_path_csv(o.stream(), paths[0]);
    } else {
        io::write_ensemble_csv(o.stream(), paths);
    }
    o.close();
    if (!c.increments.empty()) {
        if (!paths[0].increments) throw ValidationError("--increments needs --method volterra");
        std::ofstream f(c.increments);
        if (!f) throw std::ios_base::failure("cannot write " + c.increments);
        f << "t,dW\n";
        for (int j = 0; j < grid.m; ++j) f << io::format_double(grid.at(j + 1)) << ',' << io::format_double((*paths[0].increments)[j]) << '\n';
        if (!f) throw std::ios_base::failure("write failed for " + c.increments);
    }
}

void cmd_figures(const RunConfig& c, std::ostream& out) {
    std::string dir = c.out;
    if (dir.empty()) {
        const char* env = std::getenv(kOutDirEnv);
        dir = env && *env ? env : "figures";
    }
    std::filesystem::create_directories(dir);
    const Grid grid(1.0, c.fig_m);
    const double bases[] = {0.1, 0.25, 0.5, 0.75, 0.9};
    std::vector<int> steps;
    for (int s = c.fig_m; s >= 16 && steps.size() < 3; s /= 4) steps.insert(steps.begin(), s);
    out << "base_H,order,max_abs,first_difference_exponent,fourth_difference_exponent\n";
    for (int b = 0; b < 5; ++b) {
        RngStream rng(c.seed, std::uint64_t(b));
        SamplePath p = simulate_fgn_fft(bases[b], grid, rng);
        for (int n = 1; n <= 4; ++n) {
            if (n > 1) p = integrate_path(p);
            char name[64];
            std::snprintf(name, sizeof name, "fig_H%.2f_n%d.svg", bases[b], n);
            const std::string path = (std::filesystem::path(dir) / name).string();
            std::ofstream f(path);
            if (!f) throw std::ios_base::failure("cannot write " + path);
            char title[96];
            std::snprintf(title, sizeof title, "order %d, H = %.2f", n, bases[b] + n - 1);
            io::write_svg(f, title, {{grid.points(), p.values}});
            if (!f) throw std::ios_base::failure("write failed for " + path);
            out << io::format_double(bases[b]) << ',' << n << ',' << io::format_double(p.values.cwiseAbs().maxCoeff());
            if (steps.size() >= 2)
                out << ',' << io::format_double(difference_scaling_exponent(p, 1, steps)) << ','
                    << io::format_double(difference_scaling_exponent(p, 4, steps));
            else
                out << ",,";
            out << '\n';
        }
    }
}

void cmd_cov(const RunConfig& c, std::ostream& out) {
    const HurstOrder ho = order_of(c);
    if (c.grid < 1) throw ValidationError("--grid must be positive");
    const Grid g(c.T, c.grid);
    Output o(c.out, "cov.csv", out);
    o.stream() << "t,s,cov\n";
    for (int i = 1; i <= c.grid; ++i)
        for (int j = 1; j <= c.grid; ++j)
            o.stream() << io::format_double(g.at(i)) << ',' << io::format_double(g.at(j)) << ','
                       << io::format_double(nfbm_cov_closed(ho, g.at(i), g.at(j), parse_mode(c.mode))) << '\n';
    o.close();
}

void cmd_predict(const RunConfig& c, std::ostream& out) {
    const HurstOrder ho = order_of(c);
    SamplePath path;
    if (!c.in.empty()) {
        path = read_path(c.in, ho);
    } else {
        RngStream rng(c.seed, 0);
        path = simulate_volterra(ho, Grid(c.T, c.m), rng);
    }
    const Grid& g = path.grid;
    const double x = c.u / g.step();
    if (std::abs(x - std::round(x)) > 1e-9) throw ValidationError("--u must be a grid point");
    const int J = int(std::lround(x));
    if (J < 0 || J >= g.m) throw ValidationError("--u must lie in [0,T)");
    Eigen::VectorXd targets(g.m - J);
    for (int i = J + 1; i <= g.m; ++i) targets[i - J - 1] = g.at(i);
    const ConditionalLaw law = predict(ho, path, g.at(J), targets);
    Output o(c.out, "predict.csv", out);
    o.stream() << "t,mean,var,lo95,hi95\n";
    for (Eigen::Index k = 0; k < targets.size(); ++k) {
        const double mu = law.mean[k], v = std::max(0.0, law.covariance(k, k));
        o.stream() << io::format_double(targets[k]) << ',' << io::format_double(mu) << ',' << io::format_double(v) << ','
                   << io::format_double(mu - 1.96 * std::sqrt(v)) << ',' << io::format_double(mu + 1.96 * std::sqrt(v)) << '\n';
    }
    o.close();
}

void cmd_loglik(const RunConfig& c, std::ostream& out) {
    if (c.in.empty()) throw ValidationError("loglik needs --in with a Brownian path CSV");
    SamplePath W = read_path(c.in, HurstOrder(1, 0.5));
    Eigen::VectorXd dW = W.values.tail(W.grid.m) - W.values.head(W.grid.m);
    W.increments = dW;
    DriftModel model = DriftModel::constant(W.grid, c.drift, c.beta);
    if (!c.kernel.empty()) {
        const io::Table tab = io::read_csv_file(c.kernel);
        const int cs = tab.column("s"), cu = tab.column("u"), cb = tab.column("b");
        const double d = W.grid.step();
        for (const auto& row : tab.rows) {
            const double ls = row[cs] / d, lu = row[cu] / d;
            if (std::abs(ls - std::round(ls)) > 1e-9 || std::abs(lu - std::round(lu)) > 1e-9)
                throw ValidationError("kernel table entries must sit on grid points");
            const long l = std::lround(ls), j = std::lround(lu);
            if (!(j < l) || j < 0 || l >= W.grid.m) throw ValidationError("kernel table needs 0 <= u < s < T");
            model.b(l, j) += row[cb];
        }
    }
    const Eigen::VectorXd ell = log_likelihood_path(W, model);
    Output o(c.out, "loglik.csv", out);
    o.stream() << "t,loglik\n";
    for (int i = 0; i <= W.grid.m; ++i) o.stream() << io::format_double(W.grid.at(i)) << ',' << io::format_double(ell[i]) << '\n';
    o.close();
}

void cmd_invert(const RunConfig& c, std::ostream& out) {
    if (c.in.empty()) throw ValidationError("invert needs --in with a path CSV");
    const HurstOrder ho = order_of(c);
    const SamplePath path = read_path(c.in, ho);
    const Eigen::VectorXd dW = invert_kernel_matrix(kernel_matrix(ho, path.grid), path);
    Output o(c.out, "invert.csv", out);
    o.stream() << "t,dW\n";
    for (int j = 0; j < path.grid.m; ++j) o.stream() << io::format_double(path.grid.at(j + 1)) << ',' << io::format_double(dW[j]) << '\n';
    o.close();
}

void add_order(CLI::App* app, RunConfig& c) {
    app->add_option("--n", c.n, "order n of the process (positive integer)")->capture_default_str();
    app->add_option("--H", c.H, "Hurst index H, must lie in (n-1, n) (dimensionless)")->capture_default_str();
}

void add_grid(CLI::App* app, RunConfig& c) {
    app->add_option("--T", c.T, "horizon (time units)")->capture_default_str();
    app->add_option("--m", c.m, "number of grid steps (count, >= 2)")->capture_default_str()->check(CLI::Range(2, 1 << 20));
}

void add_out(CLI::App* app, RunConfig& c, const char* what) {
    app->add_option("--out", c.out, std::string(what) + " (path; default $NFBM_OUT_DIR or stdout)");
}

void add_threads(CLI::App* app, RunConfig& c) {
    app->add_option("--threads", c.threads, "worker threads (count, 0 = all cores)")->capture_default_str()->check(CLI::NonNegativeNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Simulation, prediction and likelihoods for nth-order fractional Brownian motion", "nfbm"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "simulate sample paths on a uniform grid");
    add_order(sim, c);
    add_grid(sim, c);
    sim->add_option("--seed", c.seed, "random seed (64-bit integer)")->capture_default_str();
    sim->add_option("--paths", c.paths, "number of paths (count, >= 1)")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--method", c.method, "volterra | cholesky | fft")->capture_default_str()->check(CLI::IsMember({"volterra", "cholesky", "fft"}));
    sim->add_option("--mode", c.mode, "normalization for cholesky: mg | mvn")->capture_default_str()->check(CLI::IsMember({"mg", "mvn"}));
    sim->add_option("--format", c.format, "csv | svg")->capture_default_str()->check(CLI::IsMember({"csv", "svg"}));
    sim->add_option("--increments", c.increments, "also write the driving increments as t,dW (path)");
    add_out(sim, c, "output file");
    add_threads(sim, c);

    auto* fig = app.add_subcommand("figures", "draw orders 1-4 for base H in {0.1, 0.25, 0.5, 0.75, 0.9}");
    fig->add_option("--m", c.fig_m, "number of grid steps on [0,1] (count)")->capture_default_str()->check(CLI::Range(2, 1 << 20));
    fig->add_option("--seed", c.seed, "random seed (64-bit integer)")->capture_default_str();
    add_out(fig, c, "output directory for the 20 SVG files");

    auto* cov = app.add_subcommand("cov", "covariance table on a uniform grid");
    add_order(cov, c);
    cov->add_option("--T", c.T, "horizon (time units)")->capture_default_str();
    cov->add_option("--grid", c.grid, "points per axis, t = k T/grid for k = 1..grid (count)")->capture_default_str();
    cov->add_option("--mode", c.mode, "normalization: mg | mvn")->capture_default_str()->check(CLI::IsMember({"mg", "mvn"}));
    add_out(cov, c, "output file");

    auto* pred = app.add_subcommand("predict", "conditional mean and variance given the path up to u");
    add_order(pred, c);
    pred->add_option("--T", c.T, "horizon when simulating (time units)")->capture_default_str();
    pred->add_option("--m", c.m, "grid steps when simulating (count)")->capture_default_str()->check(CLI::Range(2, 1 << 20));
    pred->add_option("--seed", c.seed, "random seed when simulating (64-bit integer)")->capture_default_str();
    pred->add_option("--u", c.u, "conditioning time, a grid point (time units)")->capture_default_str();
    pred->add_option("--in", c.in, "observed path CSV with columns t,value (path; simulated when absent)");
    add_out(pred, c, "output file");

    auto* ll = app.add_subcommand("loglik", "log-likelihood ratio of a drift model along a Brownian path");
    ll->add_option("--in", c.in, "Brownian path CSV with columns t,value (path)")->required();
    ll->add_option("--drift", c.drift, "constant drift a (1/sqrt(time units))")->capture_default_str();
    ll->add_option("--beta", c.beta, "constant kernel b (1/time units)")->capture_default_str();
    ll->add_option("--kernel", c.kernel, "kernel table CSV with columns s,u,b, added to --beta (path)");
    add_out(ll, c, "output file");

    auto* inv = app.add_subcommand("invert", "recover the driving increments from a path");
    add_order(inv, c);
    inv->add_option("--in", c.in, "path CSV with columns t,value (path)")->required();
    add_out(inv, c, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sim) cmd_simulate(c, out);
        else if (*fig) cmd_figures(c, out);
        else if (*cov) cmd_cov(c, out);
        else if (*pred) cmd_predict(c, out);
        else if (*ll) cmd_loglik(c, out);
        else if (*inv) cmd_invert(c, out);
        return 0;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {  // validation, roughness, unsupported order
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {  // singular, conditioning, accuracy, embedding
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace nfbm
