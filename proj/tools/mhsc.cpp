// mhsc: verify congruence claims, sweep prime grids, run relation discovery,
// and self-test the engines. Exit codes: 0 all pass, 1 any fail, 2 usage or
// domain error.

#include <CLI11.hpp>
#include <mhsc/cli.hpp>

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    using namespace mhsc;

    CLI::App app{"exact verification and relation discovery for prime-restricted harmonic sums"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(engine_version));

    // verify
    auto* verify = app.add_subcommand("verify", "check one claim at a single grid point");
    cli::verify_options vopt;
    verify->add_option("--claim", vopt.claim_id, "claim id")->required();
    verify->add_option("--p", vopt.p, "prime")->required();
    verify->add_option("--r", vopt.r, "prime-power exponent (claim minimum when omitted)");
    verify->add_option("--m", vopt.m, "multiplier / depth parameter (claim minimum when omitted)");
    verify->add_option("--format", vopt.format, "output format")
        ->check(CLI::IsMember({"tsv", "json"}))
        ->capture_default_str();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run claims over a prime grid");
    cli::sweep_options sopt;
    std::string sweep_r = "1..1", sweep_m = "1..1";
    sweep->add_option("--claims", sopt.ids, "comma-separated claim ids")->required()->delimiter(',');
    sweep->add_option("--pmin", sopt.p.lo, "smallest prime")->required();
    sweep->add_option("--pmax", sopt.p.hi, "largest prime")->required();
    sweep->add_option("--r", sweep_r, "exponent range, N or A..B")->capture_default_str();
    sweep->add_option("--m", sweep_m, "multiplier range, N or A..B")->capture_default_str();
    sweep->add_option("--format", sopt.format, "output format")
        ->check(CLI::IsMember({"tsv", "json"}))
        ->capture_default_str();
    sweep->add_option("--cache", sopt.cache_path, "JSON-lines residue cache path")->envname("MHSC_CACHE");
    sweep->add_option("--jobs", sopt.jobs, "worker count")->check(CLI::PositiveNumber)->capture_default_str();

    // discover
    auto* discover = app.add_subcommand("discover", "search for a Bernoulli-basis combination");
    cli::discover_options dopt;
    std::string height_text = "1e12";
    discover->add_option("--target", dopt.target, "target recipe id")->required();
    discover->add_option("--weight", dopt.weight, "total basis weight")->required();
    discover->add_option("--primes", dopt.prime_count, "window prime count")->required();
    discover->add_option("--m", dopt.m, "cover multiplier (targets that take one)");
    discover->add_option("--height-bound", height_text, "largest accepted coefficient height")
        ->capture_default_str();
    discover->add_option("--cache", dopt.cache_path, "JSON-lines residue cache path")->envname("MHSC_CACHE");

    // selftest
    auto* selftest = app.add_subcommand("selftest", "run the oracle-equivalence and invariant suites");
    cli::selftest_options topt;
    selftest->add_flag("--quick", topt.quick, "reduced grids, well under a minute");
    selftest->add_option("--cache", topt.cache_path, "validate this cache file by recomputation")
        ->envname("MHSC_CACHE");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::exit_usage;
    }

    try {
        if (*verify) return cli::run_verify(vopt, std::cout, std::cerr);
        if (*sweep) {
            sopt.r = cli::parse_range(sweep_r);
            sopt.m = cli::parse_range(sweep_m);
            return cli::run_sweep(sopt, std::cout, std::cerr);
        }
        if (*discover) {
            dopt.height_bound = cli::parse_decimal_exact(height_text);
            return cli::run_discover(dopt, std::cout, std::cerr);
        }
        return cli::run_selftest(topt, std::cout, std::cerr);
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_usage;
    }
}
