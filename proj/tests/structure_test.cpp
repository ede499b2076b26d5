#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "idc/core/record.hpp"
#include "idc/lang/ast.hpp"

// Structural guarantees enforced at the source level: the effect
// registry is reachable only from the mediation path, the pure evaluator
// has no effect or ledger access, and the chain verifier depends on the
// core types alone. The scan covers src/ and include/ (the artifact);
// tests may exercise realize() directly.
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::vector<fs::path> source_files() {
  std::vector<fs::path> files;
  const fs::path root(IDC_SOURCE_ROOT);
  for (const char* dir : {"src", "include"}) {
    for (const auto& entry : fs::recursive_directory_iterator(root / dir)) {
      if (!entry.is_regular_file()) continue;
      const std::string ext = entry.path().extension().string();
      if (ext == ".cpp" || ext == ".hpp") files.push_back(entry.path());
    }
  }
  return files;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

// the step grammar has exactly two forms and only AskStep reaches effects
static_assert(std::variant_size_v<idc::lang::Step> == 2);
static_assert(
    std::is_same_v<std::variant_alternative_t<0, idc::lang::Step>, idc::lang::ComputeStep>);
static_assert(
    std::is_same_v<std::variant_alternative_t<1, idc::lang::Step>, idc::lang::AskStep>);

TEST_CASE("realize() is invoked only from the mediation translation unit") {
  std::vector<std::string> offenders;
  for (const fs::path& file : source_files()) {
    const std::string text = slurp(file);
    if (contains(text, ".realize(") || contains(text, "->realize(")) {
      if (file.filename() != "mediate.cpp") offenders.push_back(file.string());
    }
  }
  CHECK(offenders.empty());
  if (!offenders.empty())
    for (const std::string& f : offenders) MESSAGE("unexpected realize() call site: ", f);
}

TEST_CASE("the pure evaluator has no effect, ledger, or policy access") {
  const fs::path eval_cpp = fs::path(IDC_SOURCE_ROOT) / "src" / "runtime" / "eval.cpp";
  const std::string text = slurp(eval_cpp);
  REQUIRE_FALSE(text.empty());
  CHECK_FALSE(contains(text, "EffectRegistry"));
  CHECK_FALSE(contains(text, "realize"));
  CHECK_FALSE(contains(text, "Ledger"));
  CHECK_FALSE(contains(text, "effects/"));
  CHECK_FALSE(contains(text, "ledger/"));
  CHECK_FALSE(contains(text, "policy/"));
}

TEST_CASE("the language layer has no effect or ledger constructs") {
  for (const char* rel : {"src/lang", "include/idc/lang"}) {
    for (const auto& entry : fs::recursive_directory_iterator(fs::path(IDC_SOURCE_ROOT) / rel)) {
      if (!entry.is_regular_file()) continue;
      const std::string text = slurp(entry.path());
      CHECK_FALSE(contains(text, "EffectRegistry"));
      CHECK_FALSE(contains(text, "realize"));
      CHECK_FALSE(contains(text, "Ledger"));
    }
  }
}

TEST_CASE("the chain verifier depends only on core headers") {
  const std::string text = slurp(fs::path(IDC_SOURCE_ROOT) / "src" / "ledger" / "verify.cpp");
  REQUIRE_FALSE(text.empty());
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("#include", 0) != 0) continue;
    const bool project_header = contains(line, "idc/");
    if (!project_header) continue;
    CHECK((contains(line, "idc/core/") || contains(line, "idc/ledger/")));
  }
  // and nothing from the governance or runtime side
  CHECK_FALSE(contains(text, "idc/policy"));
  CHECK_FALSE(contains(text, "idc/runtime"));
  CHECK_FALSE(contains(text, "idc/effects"));
}

TEST_CASE("decisions are exactly allow, deny, escalate") {
  static_assert(idc::kDecisionCount == 3);
  CHECK(idc::decision_name(idc::Decision::allow) == "allow");
  CHECK(idc::decision_name(idc::Decision::deny) == "deny");
  CHECK(idc::decision_name(idc::Decision::escalate) == "escalate");
}
