// transit: command-line front end. Reads a JSON job, writes a JSON result.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "transit/cli.hpp"

int main(int argc, char** argv) {
  using transit::cli::JobSpec;
  JobSpec spec;
  double tol_block = 0.0, tol_quad = 0.0;

  CLI::App app{"transition probabilities between positive functionals"};
  app.add_option("command", spec.command, "computation to run")
      ->required()
      ->check(CLI::IsMember(transit::cli::commands()));
  app.add_option("--input", spec.input, "JSON job file, or inline JSON starting with '{'");
  app.add_option("--output", spec.output, "write the result here instead of stdout");
  app.add_option("--seed", spec.seed, "seed for every random choice")->default_val(0);
  auto* tb = app.add_option("--tol-block", tol_block, "block-form residual tolerance (default 1e-8)")
                 ->check(CLI::PositiveNumber);
  auto* tq = app.add_option("--tol-quad", tol_quad, "relative quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--level", spec.level, "selftest level")->check(CLI::IsMember({"quick", "full"}));
  app.add_flag("--debug-transpose-blocks", spec.debug_transpose_blocks)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::json err = {{"schema", transit::json_io::kSchema},
                          {"error", {{"kind", "validation"}, {"detail", e.what()}}}};
    std::cout << err.dump(2) << "\n";
    return 2;
  }
  if (tb->count() > 0) spec.tol_block = tol_block;
  if (tq->count() > 0) spec.tol_quad = tol_quad;

  const auto result = transit::cli::run(spec);
  const std::string text = result.document.dump(2) + "\n";
  if (!spec.output.empty() && result.exit_code != 2) {
    std::ofstream out(spec.output);
    if (!out) {
      std::cerr << "cannot write " << spec.output << "\n";
      return 2;
    }
    out << text;
  } else {
    std::cout << text;
  }
  if (spec.command == "selftest") {
    for (const auto& c : result.document.value("criteria", nlohmann::json::array())) {
      std::cerr << (c.at("pass").get<bool>() ? "[PASS] " : "[FAIL] ") << c.at("id") << " "
                << c.at("name").get<std::string>() << "\n";
    }
  }
  return result.exit_code;
}
