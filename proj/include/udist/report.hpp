#pragma once

#include "udist/suite.hpp"

#include <string>

namespace udist {

enum class Format { json, csv, text };
/// Throws ConfigError on anything but json, csv or text.
Format parse_format(const std::string& s);

/// {config, context, reports, summary}.
nlohmann::ordered_json suite_json(const SuiteConfig& config, const Context& ctx, const SuiteResult& result);
std::string render_suite(const nlohmann::ordered_json& doc, Format format);

/// Transition matrix of the basis corollary at level r.
nlohmann::ordered_json basis_json(const KWorkspace& kws, std::uint64_t r);
std::string render_basis(const nlohmann::ordered_json& doc, Format format);

enum class ClassKind { universal, canonical };
/// A representative as fraction -> coefficient mod M, plus its coordinates in
/// the canonical basis. For the canonical kind, g selects c̄_g (default g = r).
nlohmann::ordered_json class_json(const KWorkspace& kws, ClassKind kind, std::uint64_t r, std::uint64_t g);
std::string render_class(const nlohmann::ordered_json& doc, Format format);

}  // namespace udist
