#include <iostream>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/emit.hpp"

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kIo = 1;
constexpr int kConfig = 2;
constexpr int kNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace spectral;
  CLI::App app{"Spectral curves y^2 = W'(z)^2 + f(z): branch points, flows, scans and scaling limits."};
  app.require_subcommand(1, 1);

  std::string config, out = ".";
  int threads = 0;
  double tol = 0.0;
  app.add_option("--config", config, "JSON run configuration (see docs/config.md)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output directory");
  app.add_option("--threads", threads, "Worker threads for scans (overrides the config)")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "Newton tolerance (overrides tolerances.newton)")->check(CLI::PositiveNumber);
  for (const std::string& name : cli::command_names()) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    cli::RunSpec spec = cli::parse_config(std::filesystem::path(config));
    if (threads > 0) {
      spec.threads = threads;
      spec.echo["threads"] = threads;
    }
    if (tol > 0.0) {
      spec.tol.newton = tol;
      spec.echo["tolerances"]["newton"] = tol;
    }
    for (const auto& p : cli::run_command(command, spec, out, std::cerr)) std::cout << p.string() << "\n";
    return kOk;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const cli::IoError& e) {
    std::cerr << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
}
