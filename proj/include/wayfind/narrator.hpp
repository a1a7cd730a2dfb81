#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wayfind/compressor.hpp"

namespace wayfind {

enum class NarrationSource { kTemplate, kLanguageModel };
enum class NarrationMode { kTemplate, kLanguageModel };

std::string_view to_string(NarrationSource source);
std::string_view to_string(NarrationMode mode);
std::optional<NarrationMode> parse_narration_mode(std::string_view text);  // "template" | "lm"

struct InstructionLine {
  int index;
  std::string text;  // without the "<index>. " prefix

  friend bool operator==(const InstructionLine&, const InstructionLine&) = default;
};

struct InstructionScript {
  std::vector<InstructionLine> lines;
  NarrationSource source = NarrationSource::kTemplate;
  // Why the language-model answer was discarded, when it was.
  std::vector<std::string> fallback_reasons;

  std::vector<std::string> numbered_lines() const;  // "1. Start by ..."
  std::string render() const;                       // newline-joined
};

/// "north", "southeast", ...
std::string_view direction_phrase(Direction d);

/// Deterministic reference narration. Throws kEmptyScript.
InstructionScript render_template(const TerseScript& script);

/// Checks numbering, line count and that every command's count, direction
/// word or portal sentence appears on its line. Empty means conforming.
std::vector<std::string> instruction_violations(const InstructionScript& guide,
                                                const TerseScript& expected);

struct SystemPrompt {
  std::string text;
};

SystemPrompt default_system_prompt();

/// System prompt followed by the terse block under a "Terse commands:" header.
/// Throws kEmptyScript for an empty terse block, kInvalidArgument for an
/// empty system prompt.
std::string build_prompt(const SystemPrompt& system, std::string_view terse_text);

struct LmConfig {
  std::string endpoint;     // e.g. "http://127.0.0.1:8081/v1/complete"
  int max_new_tokens = 0;   // 0 = scale with the number of commands
  double temperature = 0.0; // greedy
  double top_p = 1.0;
  int top_k = 0;            // 0 = disabled
  std::chrono::milliseconds timeout{30000};
};

/// Text-in/text-out completion service. Implementations throw kTimeout,
/// kEndpointUnavailable or kMalformedResponse.
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string complete(const std::string& prompt, const LmConfig& config) = 0;
};

/// JSON over HTTP, see docs/completion-protocol.md.
class HttpCompletionBackend final : public CompletionBackend {
 public:
  std::string complete(const std::string& prompt, const LmConfig& config) override;
};

/// One request to config.endpoint through HttpCompletionBackend; no retries.
std::string invoke_lm(const std::string& prompt, const LmConfig& config);

struct RepairReport {
  std::vector<std::string> violations;
};

std::variant<InstructionScript, RepairReport> postprocess(std::string_view raw,
                                                          const TerseScript& expected);

struct NarrateOptions {
  NarrationMode mode = NarrationMode::kTemplate;
  LmConfig lm;
  SystemPrompt system = default_system_prompt();
  // Not owned. nullptr selects HttpCompletionBackend.
  CompletionBackend* backend = nullptr;
};

/// Template mode renders directly. Language-model mode falls back to the
/// template on transport errors or a RepairReport. Throws kEmptyScript.
InstructionScript narrate(const TerseScript& script, const NarrateOptions& options = {});

}  // namespace wayfind
