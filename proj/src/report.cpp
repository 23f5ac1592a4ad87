#include "udist/report.hpp"

#include <sstream>

namespace udist {

using ojson = nlohmann::ordered_json;

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string params_text(const ojson& params) {
  std::string out;
  for (const auto& [k, v] : params.items()) {
    if (!out.empty()) out += ' ';
    out += k + "=" + v.dump();
  }
  return out;
}

ojson representative_json(const SparseIntVector& chain, std::uint64_t r, std::uint32_t modulus) {
  ojson out = ojson::array();
  for (const auto& e : chain.entries()) {
    const Residue c = to_residue(e.value, modulus);
    if (c != 0) out.push_back({{"a", Fraction::at_level(e.index, r).str()}, {"coefficient", c}});
  }
  return out;
}

}  // namespace

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "text") return Format::text;
  throw ConfigError("unknown format: " + s);
}

ojson suite_json(const SuiteConfig& config, const Context& ctx, const SuiteResult& result) {
  ojson doc;
  const nlohmann::json cfg = config_to_json(config);
  doc["config"] = ojson::parse(cfg.dump());
  ojson roots = ojson::object();
  for (auto p : ctx.primes()) roots[std::to_string(p)] = ctx.root(p);
  doc["context"] = {{"M", ctx.M()}, {"primes", ctx.primes()}, {"roots", roots}, {"full_level", ctx.full_level()}};
  ojson reports = ojson::array();
  std::size_t passed = 0, failed = 0, errors = 0;
  for (const auto& r : result.reports) {
    reports.push_back({{"name", r.name},
                       {"anchor", r.anchor},
                       {"params", r.params},
                       {"verdict", to_string(r.verdict)},
                       {"details", r.details},
                       {"millis", r.millis}});
    (r.verdict == Verdict::pass ? passed : r.verdict == Verdict::fail ? failed : errors) += 1;
  }
  doc["reports"] = reports;
  doc["summary"] = {{"total", result.reports.size()}, {"passed", passed}, {"failed", failed},
                    {"errors", errors},  {"exit_code", result.exit_code}};
  if (!result.diagnostic.empty()) doc["summary"]["diagnostic"] = result.diagnostic;
  return doc;
}

std::string render_suite(const ojson& doc, Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::json:
      out << doc.dump(2) << '\n';
      break;
    case Format::csv:
      out << "name,anchor,params,verdict,millis,details\n";
      for (const auto& r : doc.at("reports"))
        out << csv_field(r.at("name").get<std::string>()) << ',' << csv_field(r.at("anchor").get<std::string>()) << ','
            << csv_field(params_text(r.at("params"))) << ',' << r.at("verdict").get<std::string>() << ','
            << r.at("millis").dump() << ',' << csv_field(r.at("details").dump()) << '\n';
      break;
    case Format::text: {
      for (const auto& r : doc.at("reports")) {
        std::string verdict = r.at("verdict").get<std::string>();
        for (auto& c : verdict) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        out << verdict << "  " << r.at("name").get<std::string>() << "  " << params_text(r.at("params"));
        if (r.at("millis").get<double>() > 0) out << "  (" << static_cast<long>(r.at("millis").get<double>()) << " ms)";
        out << '\n';
        if (r.at("verdict") != "pass") out << "      " << r.at("details").dump() << '\n';
      }
      const auto& s = doc.at("summary");
      out << s.at("passed").get<std::size_t>() << '/' << s.at("total").get<std::size_t>() << " passed, "
          << s.at("failed").get<std::size_t>() << " failed, " << s.at("errors").get<std::size_t>() << " errors\n";
      if (s.contains("diagnostic")) out << "internal contradiction: " << s.at("diagnostic").get<std::string>() << '\n';
      break;
    }
  }
  return out.str();
}

ojson basis_json(const KWorkspace& kws, std::uint64_t r) {
  const BasisCorollaryReport rep = basis_corollary_check(kws, r);
  ojson doc;
  doc["M"] = kws.base().M();
  doc["r"] = r;
  doc["divisors"] = rep.divisors;
  doc["matrix"] = rep.matrix;
  doc["normalized"] = rep.normalized;
  doc["unitriangular"] = rep.unitriangular;
  doc["determinant"] = rep.determinant;
  doc["pass"] = rep.pass();
  return doc;
}

std::string render_basis(const ojson& doc, Format format) {
  std::ostringstream out;
  const auto divisors = doc.at("divisors").get<std::vector<std::uint64_t>>();
  const auto matrix = doc.at("matrix").get<std::vector<std::vector<Residue>>>();
  switch (format) {
    case Format::json:
      out << doc.dump(2) << '\n';
      break;
    case Format::csv:
      out << "g";
      for (auto d : divisors) out << ",cbar_" << d;
      out << '\n';
      for (std::size_t i = 0; i < divisors.size(); ++i) {
        out << "c_" << divisors[i];
        for (auto v : matrix[i]) out << ',' << v;
        out << '\n';
      }
      break;
    case Format::text:
      out << "c_g in the canonical basis, r = " << doc.at("r").get<std::uint64_t>() << ", M = " << doc.at("M").get<std::uint32_t>()
          << '\n';
      for (std::size_t i = 0; i < divisors.size(); ++i) {
        out << "c_" << divisors[i] << " :";
        for (auto v : matrix[i]) out << ' ' << v;
        out << '\n';
      }
      out << "unitriangular " << (doc.at("unitriangular").get<bool>() ? "yes" : "no") << ", det "
          << doc.at("determinant").get<Residue>() << '\n';
      break;
  }
  return out.str();
}

ojson class_json(const KWorkspace& kws, ClassKind kind, std::uint64_t r, std::uint64_t g) {
  const Workspace& ws = kws.base();
  const std::uint32_t M = ws.M();
  const LevelData& data = ws.level(r);
  const CanonicalBasis& basis = kws.canonical(r);
  ojson doc;
  doc["M"] = M;
  doc["r"] = r;
  ModVector cls;
  if (kind == ClassKind::universal) {
    doc["kind"] = "universal";
    const KolyvaginClass c = universal_kolyvagin_class(ws, r);
    doc["representative"] = representative_json(c.chain, r, M);
    cls = c.cls;
  } else {
    doc["kind"] = "canonical";
    doc["g"] = g;
    const std::size_t k = basis.position(g);
    doc["representative"] = representative_json(kws.window(r).bottom_part(basis.cocycles[k]), r, M);
    cls = basis.classes[k];
  }
  doc["basis"] = basis.divisors;
  const auto coords = canonical_coordinates(kws, r, cls);
  if (!coords) throw InternalContradiction("class has no canonical coordinates");
  std::vector<Residue> dense(basis.divisors.size(), 0);
  for (const auto& e : *coords) dense[e.index] = e.value;
  doc["coordinates"] = dense;
  doc["invariant"] = is_invariant(data, cls, M);
  return doc;
}

std::string render_class(const ojson& doc, Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::json:
      out << doc.dump(2) << '\n';
      break;
    case Format::csv:
      out << "a,coefficient\n";
      for (const auto& t : doc.at("representative"))
        out << t.at("a").get<std::string>() << ',' << t.at("coefficient").get<Residue>() << '\n';
      break;
    case Format::text: {
      for (const auto& t : doc.at("representative"))
        out << '[' << t.at("a").get<std::string>() << "] : " << t.at("coefficient").get<Residue>() << '\n';
      const auto divisors = doc.at("basis").get<std::vector<std::uint64_t>>();
      const auto coords = doc.at("coordinates").get<std::vector<Residue>>();
      out << "coordinates (";
      for (std::size_t i = 0; i < coords.size(); ++i) out << (i ? "," : "") << coords[i];
      out << ") w.r.t. (";
      for (std::size_t i = 0; i < divisors.size(); ++i) out << (i ? ", " : "") << "cbar_" << divisors[i];
      out << ")\n";
      break;
    }
  }
  return out.str();
}

}  // namespace udist
