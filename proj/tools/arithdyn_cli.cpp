// Command-line front end: reads a JSON run configuration, runs one command
// and writes a JSON report (or an orbit CSV). Exit codes: 0 success, 2 bad
// configuration, 3 mathematical precondition failure, 4 resource limit.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <new>

#include "CLI11.hpp"
#include "arithdyn/cli/commands.hpp"
#include "arithdyn_schemas.hpp"

namespace {

using namespace arithdyn;
using arithdyn::cli::Json;

std::string utc_timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Globals {
    std::string config_path;
    std::string precision;
    bool reproducible = false;
    std::string out_path;
    std::string format = "json";
    bool print_config = false;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_.open(path);
        if (!file_) throw InvalidInput("cannot write '" + path + "'");
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

io::RunConfig load(const Globals& g) {
    io::Json doc = g.config_path.empty() ? io::Json::object() : io::read_json_file(g.config_path);
    io::validate_or_throw(doc, io::Json::parse(cli::kConfigSchema), "config");
    io::RunConfig c = io::parse_run_config(doc);
    if (!g.precision.empty()) {
        Rational w = parse_rational(g.precision);
        if (sgn(w) <= 0) throw InvalidInput("--precision must be positive");
        c.options.log_width = w;
        c.options.lambda_width = w;
    }
    return c;
}

/// Every emitted report must satisfy the published schema.
void check_report(const std::string& command, const Json& env) {
    Json schema = Json::parse(cli::kReportSchema);
    auto errs = io::SchemaValidator(schema).errors(env);
    auto sub = io::SchemaValidator(schema).errors(env.at("report"), command);
    errs.insert(errs.end(), sub.begin(), sub.end());
    if (errs.empty()) return;
    std::string msg = "emitted report violates its schema:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw InvariantViolation(msg);
}

void emit(const Globals& g, const std::string& command, const io::RunConfig& c, Json report) {
    std::optional<std::string> ts;
    if (!g.reproducible) ts = utc_timestamp();
    Json env = cli::envelope(command, c.name, std::move(report), ts);
    check_report(command, env);
    Output out(g.out_path);
    out.stream() << env.dump(2) << '\n';
}

void write_csv_file(const std::string& path, const OrbitRecord& r) {
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot write '" + path + "'");
    io::write_orbit_csv(f, r);
}

int run(int argc, char** argv) {
    CLI::App app{"Dynamical degrees, arithmetic degrees and canonical heights of explicit systems over Q"};
    app.set_version_flag("--version", std::string(cli::kVersion));
    Globals g;
    app.add_option("--config", g.config_path, "JSON run configuration");
    app.add_option("--precision", g.precision, "target width for log and lambda_1 enclosures, e.g. 1e-12");
    app.add_flag("--reproducible", g.reproducible, "omit the timestamp so identical runs are byte-identical");
    app.add_option("--out", g.out_path, "output file (default stdout)");
    app.add_option("--format", g.format, "json or csv (csv: orbit tables only)")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--print-config", g.print_config, "print the effective configuration with all defaults and exit");
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string point;
    std::vector<std::string> points;
    long n_override = 0, alpha_steps = 0;
    std::string csv_path;

    auto* lambda1 = app.add_subcommand("lambda1", "first dynamical degree as an exact algebraic number");
    auto* orbit = app.add_subcommand("orbit", "orbit table (n, houses, h, h+) with alpha estimates");
    auto* alpha = app.add_subcommand("alpha", "arithmetic-degree estimates along an orbit");
    for (auto* s : {orbit, alpha}) {
        s->add_option("--point", point, "point name or index");
        s->add_option("--N", n_override, "orbit length")->check(CLI::PositiveNumber);
        s->add_option("--csv", csv_path, "also write the orbit CSV here");
    }
    auto* canh = app.add_subcommand("canh", "canonical heights with functional-equation residuals");
    canh->add_option("--point", points, "point names or indices (default: all)");
    auto* ks = app.add_subcommand("ks-verify", "Kawaguchi-Silverman comparison report");
    ks->add_option("--point", point, "point name or index");
    ks->add_option("--alpha-steps", alpha_steps, "orbit length for the alpha estimates")->check(CLI::PositiveNumber);
    auto* sweep = app.add_subcommand("sweep-periodic", "periodic points of bounded house");
    auto* bundle = app.add_subcommand("bundle", "endomorphisms of projective bundles over a curve");
    std::string action;
    unsigned bn = 0;
    std::string deg_g, delta, hn;
    bundle->add_option("action", action, "analyze")->check(CLI::IsMember({"analyze"}));
    bundle->add_option("--n", bn, "rank of the bundle (checked against the HN type)");
    bundle->add_option("--deg-g", deg_g, "degree of the base map");
    bundle->add_option("--delta", delta, "deg f / deg g");
    bundle->add_option("--hn", hn, "HN type, e.g. \"[(1,2),(1,0)]\"");
    auto* lattice = app.add_subcommand("lattice", "lattice model: lambda_1, Conditions A and B, middle index");
    auto* chow = app.add_subcommand("chow", "Chow ring of a projective bundle over a curve");
    unsigned cn = 0;
    std::string cc1 = "0";
    std::vector<std::string> exprs;
    chow->add_option("--n", cn, "rank");
    chow->add_option("--c1", cc1, "degree of the bundle");
    chow->add_option("--expr", exprs, "expressions in D and F");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    io::RunConfig c = load(g);
    if (n_override > 0) c.options.N = n_override;
    if (alpha_steps > 0) c.options.alpha_steps = alpha_steps;
    if (g.print_config) {
        Output out(g.out_path);
        out.stream() << io::config_json(c).dump(2) << '\n';
        return 0;
    }
    if (app.get_subcommands().empty()) throw InvalidInput("no command given (see --help)");
    if (g.format == "csv" && !orbit->parsed() && !alpha->parsed())
        throw InvalidInput("--format csv applies to orbit and alpha only");

    if (lambda1->parsed()) emit(g, "lambda1", c, cli::cmd_lambda1(c));
    if (orbit->parsed() || alpha->parsed()) {
        const auto& p = cli::select_point(c, point);
        cli::OrbitOutcome o = cli::orbit_outcome(c, p);
        if (!csv_path.empty()) write_csv_file(csv_path, o.record);
        if (g.format == "csv") {
            Output out(g.out_path);
            io::write_orbit_csv(out.stream(), o.record);
        } else {
            std::string name = orbit->parsed() ? "orbit" : "alpha";
            emit(g, name, c, cli::orbit_report(c, p, o, orbit->parsed()));
        }
        if (o.error_kind) {
            std::cerr << "error: " << o.error << " (partial output written)\n";
            return exit_code_for(*o.error_kind);
        }
    }
    if (canh->parsed()) emit(g, "canh", c, cli::cmd_canh(c, points));
    if (ks->parsed()) emit(g, "ks-verify", c, cli::cmd_ks_verify(c, point));
    if (sweep->parsed()) emit(g, "sweep-periodic", c, cli::cmd_sweep_periodic(c));
    if (bundle->parsed()) {
        if (!hn.empty()) {
            if (deg_g.empty() || delta.empty()) throw InvalidInput("bundle analyze needs --deg-g, --delta and --hn");
            std::optional<unsigned> n;
            if (bn) n = bn;
            io::BundleCase b = io::make_bundle_case("cli", parse_integer(deg_g), parse_rational(delta), io::parse_hn_string(hn), n);
            emit(g, "bundle", c, cli::bundle_case_json(b));
        } else {
            emit(g, "bundle", c, cli::cmd_bundle(c));
        }
    }
    if (lattice->parsed()) emit(g, "lattice", c, cli::cmd_lattice(c));
    if (chow->parsed()) {
        if (cn) emit(g, "chow", c, cli::cmd_chow(ChowRing(cn, parse_integer(cc1)), exprs));
        else emit(g, "chow", c, cli::cmd_chow(c));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const arithdyn::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return arithdyn::exit_code_for(e.kind());
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: InvalidInput: " << e.what() << '\n';
        return 2;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: ResourceLimit: out of memory\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
