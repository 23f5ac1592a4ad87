#include "udist/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace udist;

namespace {

struct Flags {
  std::optional<std::uint32_t> M;
  std::string primes, roots, checks, config_file, out;
  std::optional<std::size_t> max_omega;
  std::string format;
  bool timing = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::uint32_t parse_u32(const std::string& s) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(s, &used);
    if (used != s.size() || v > 0xffffffffUL) throw std::invalid_argument(s);
    return static_cast<std::uint32_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("not a number: " + s);
  }
}

SuiteConfig resolve(const Flags& f) {
  SuiteConfig c;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw ConfigError("cannot read config " + f.config_file);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    c = config_from_json(j);
  }
  if (f.M) c.M = *f.M;
  if (!f.primes.empty()) {
    c.primes.clear();
    for (const auto& p : split(f.primes, ',')) c.primes.push_back(parse_u32(p));
  }
  if (!f.roots.empty()) {
    c.roots.clear();
    for (const auto& kv : split(f.roots, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("roots must look like 7=3,13=2");
      c.roots[parse_u32(kv.substr(0, eq))] = parse_u32(kv.substr(eq + 1));
    }
  }
  if (f.max_omega) c.max_omega = f.max_omega;
  if (!f.checks.empty()) c.checks = split(f.checks, ',');
  if (f.timing) c.timing = true;
  return c;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

void add_common(CLI::App* cmd, Flags& f, const std::string& default_format) {
  f.format = default_format;
  cmd->add_option("--M", f.M, "modulus M");
  cmd->add_option("--primes", f.primes, "comma-separated prime pool, each l = 1 mod M");
  cmd->add_option("--roots", f.roots, "primitive roots as l=s,...");
  cmd->add_option("--config", f.config_file, "JSON config; flags override it");
  cmd->add_option("--format", f.format, "json, csv or text");
  cmd->add_option("--out", f.out, "write output to FILE instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal ordinary distribution and Kolyvagin recursion checks"};
  app.require_subcommand(1);

  Flags verify_flags, basis_flags, class_flags;
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  add_common(verify, verify_flags, "text");
  verify->add_option("--max-omega", verify_flags.max_omega, "only levels with at most this many primes");
  verify->add_option("--checks", verify_flags.checks, "comma-separated check names, or all");
  verify->add_flag("--timing", verify_flags.timing, "record wall time per check");
  bool list_checks = false;
  verify->add_flag("--list", list_checks, "print the check names and exit");

  auto* basis = app.add_subcommand("basis", "transition matrix from {c_g} to the canonical basis");
  add_common(basis, basis_flags, "text");
  std::uint64_t basis_r = 0;
  basis->add_option("--r", basis_r, "level")->required();

  auto* cls = app.add_subcommand("class", "print a universal or canonical class");
  add_common(cls, class_flags, "text");
  std::uint64_t class_r = 0, class_g = 0;
  std::string kind = "universal";
  cls->add_option("--r", class_r, "level")->required();
  cls->add_option("--kind", kind, "universal or canonical")->check(CLI::IsMember({"universal", "canonical"}));
  cls->add_option("--g", class_g, "divisor g of r for the canonical kind (default r)");

  auto* report = app.add_subcommand("report", "re-render a saved JSON suite report");
  std::string report_in, report_format = "text", report_out;
  report->add_option("input", report_in, "JSON report written by verify --format json")->required();
  report->add_option("--format", report_format, "json, csv or text");
  report->add_option("--out", report_out, "write output to FILE instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      if (list_checks) {
        for (const auto& n : check_names()) std::cout << n << '\n';
        return 0;
      }
      const SuiteConfig config = resolve(verify_flags);
      const Format format = parse_format(verify_flags.format);
      const Workspace ws(build_context(config));
      const KWorkspace kws(ws);
      const SuiteResult result = run_suite(config, ws, kws);
      emit(render_suite(suite_json(config, ws.context(), result), format), verify_flags.out);
      if (!result.diagnostic.empty()) std::cerr << "internal contradiction: " << result.diagnostic << '\n';
      return result.exit_code;
    }
    if (basis->parsed()) {
      const SuiteConfig config = resolve(basis_flags);
      const Format format = parse_format(basis_flags.format);
      const Workspace ws(build_context(config));
      const KWorkspace kws(ws);
      const auto doc = basis_json(kws, basis_r);
      emit(render_basis(doc, format), basis_flags.out);
      return doc.at("pass").get<bool>() ? 0 : 1;
    }
    if (cls->parsed()) {
      const SuiteConfig config = resolve(class_flags);
      const Format format = parse_format(class_flags.format);
      const Workspace ws(build_context(config));
      const KWorkspace kws(ws);
      const ClassKind k = kind == "canonical" ? ClassKind::canonical : ClassKind::universal;
      emit(render_class(class_json(kws, k, class_r, class_g == 0 ? class_r : class_g), format), class_flags.out);
      return 0;
    }
    if (report->parsed()) {
      std::ifstream in(report_in);
      if (!in) throw ConfigError("cannot read " + report_in);
      nlohmann::ordered_json doc;
      try {
        in >> doc;
      } catch (const std::exception& e) {
        throw ConfigError(std::string("report: ") + e.what());
      }
      emit(render_suite(doc, parse_format(report_format)), report_out);
      return doc.at("summary").at("exit_code").get<int>();
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ContextError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InternalContradiction& e) {
    std::cerr << "internal contradiction: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
