#include "wayfind/narrator.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>
#include <regex>

#include "wayfind/error.hpp"

namespace wayfind {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string steps(int n) { return std::to_string(n) + (n == 1 ? " step" : " steps"); }

std::string transit_sentence(const PortalTransit& t) {
  return "Take the " + std::string(to_string(t.kind)) + " from Floor " +
         std::to_string(t.from_floor) + " to " + std::to_string(t.to_floor);
}

bool contains_word(const std::string& text, const std::string& word) {
  const std::regex re("\\b" + word + "\\b", std::regex::icase);
  return std::regex_search(text, re);
}

}  // namespace

std::string_view to_string(NarrationSource source) {
  return source == NarrationSource::kTemplate ? "template" : "language_model";
}

std::string_view to_string(NarrationMode mode) {
  return mode == NarrationMode::kTemplate ? "template" : "lm";
}

std::optional<NarrationMode> parse_narration_mode(std::string_view text) {
  if (iequals(text, "template")) return NarrationMode::kTemplate;
  if (iequals(text, "lm")) return NarrationMode::kLanguageModel;
  return std::nullopt;
}

std::vector<std::string> InstructionScript::numbered_lines() const {
  std::vector<std::string> out;
  out.reserve(lines.size());
  for (const InstructionLine& l : lines) out.push_back(std::to_string(l.index) + ". " + l.text);
  return out;
}

std::string InstructionScript::render() const {
  std::string out;
  for (const std::string& l : numbered_lines()) {
    if (!out.empty()) out += '\n';
    out += l;
  }
  return out;
}

std::string_view direction_phrase(Direction d) {
  switch (d) {
    case Direction::kN: return "north";
    case Direction::kS: return "south";
    case Direction::kW: return "west";
    case Direction::kE: return "east";
    case Direction::kNW: return "northwest";
    case Direction::kNE: return "northeast";
    case Direction::kSW: return "southwest";
    case Direction::kSE: return "southeast";
  }
  return "north";
}

InstructionScript render_template(const TerseScript& script) {
  if (script.commands.empty()) throw Error(ErrorCode::kEmptyScript, "terse script is empty");
  InstructionScript out;
  out.source = NarrationSource::kTemplate;
  const std::size_t n = script.commands.size();
  for (std::size_t k = 0; k < n; ++k) {
    const bool first = k == 0;
    const bool last = k + 1 == n;
    std::string text = std::visit(
        Overloaded{
            [&](const Move& m) {
              const std::string where = std::string(direction_phrase(m.dir)) + " for " + steps(m.count);
              if (first && last) return "Start by walking " + where + ", and you will reach your destination.";
              if (first) return "Start by walking " + where + ".";
              if (last) return "Finally, walk " + where + ", and you will reach your destination.";
              return "Then walk " + where + ".";
            },
            [](const PortalTransit& t) { return transit_sentence(t) + "."; },
        },
        script.commands[k]);
    out.lines.push_back({static_cast<int>(k + 1), std::move(text)});
  }
  return out;
}

std::vector<std::string> instruction_violations(const InstructionScript& guide,
                                                const TerseScript& expected) {
  std::vector<std::string> out;
  if (guide.lines.size() != expected.commands.size()) {
    out.push_back("line count " + std::to_string(guide.lines.size()) + " differs from command count " +
                  std::to_string(expected.commands.size()));
  }
  for (std::size_t k = 0; k < guide.lines.size(); ++k) {
    if (guide.lines[k].index != static_cast<int>(k + 1)) {
      out.push_back("non-consecutive numbering: line " + std::to_string(k + 1) + " is numbered " +
                    std::to_string(guide.lines[k].index));
    }
  }
  const std::size_t common = std::min(guide.lines.size(), expected.commands.size());
  for (std::size_t k = 0; k < common; ++k) {
    const std::string& text = guide.lines[k].text;
    const std::string label = "line " + std::to_string(k + 1);
    std::visit(Overloaded{
                   [&](const Move& m) {
                     if (!contains_word(text, std::to_string(m.count))) {
                       out.push_back("missing command coverage: " + label + " lacks step count " +
                                     std::to_string(m.count));
                     }
                     if (!contains_word(text, std::string(direction_phrase(m.dir)))) {
                       out.push_back("missing command coverage: " + label + " lacks direction '" +
                                     std::string(direction_phrase(m.dir)) + "'");
                     }
                   },
                   [&](const PortalTransit& t) {
                     if (text.find(transit_sentence(t)) == std::string::npos) {
                       out.push_back("missing command coverage: " + label + " lacks \"" +
                                     transit_sentence(t) + "\"");
                     }
                   },
               },
               expected.commands[k]);
  }
  return out;
}

SystemPrompt default_system_prompt() {
  return SystemPrompt{
      "You are a precise navigation assistant. \n"
      "Convert provided terse commands into a numbered walking guide.\n"
      "Use “Start by walking…” for step 1,\n"
      "“Then walk…” for steps 2…(n-1),\n"
      "\"Take the escalator from Floor n to n+1\",\n"
      "and “Finally walk…” for the last step.\n"
      "Output one numbered line per command.\n"
      "\n"
      "Here is an example case given:\n"
      "Terse commands:\n"
      "Go East 3 steps\n"
      "Take the escalator from Floor 0 to 1\n"
      "Go North 1 step\n"
      "\n"
      "For the example terse commands, the output is:\n"
      "1. Start by walking east for 3 steps.\n"
      "2. Take the escalator from Floor 0 to 1.\n"
      "2. Finally, walk north for 1 step, and you will reach your destination.\n"
      "\n"
      "Terse commands are given as follows: you have to convert them into a numbered list of "
      "directions as provided in the prior example. Keep the step number as given; do not modify "
      "it. Do not change the order of the steps, and do not add any additional steps. The output "
      "should be numbered lines starting with a number followed by a period and a space."};
}

std::string build_prompt(const SystemPrompt& system, std::string_view terse_text) {
  if (system.text.empty()) throw Error(ErrorCode::kInvalidArgument, "system prompt is empty");
  if (terse_text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw Error(ErrorCode::kEmptyScript, "terse block is empty");
  }
  std::string prompt = system.text;
  prompt += "\n\nTerse commands:\n";
  prompt += terse_text;
  prompt += '\n';
  return prompt;
}

// ---------------------------------------------------------------------------

std::string HttpCompletionBackend::complete(const std::string& prompt, const LmConfig& config) {
  if (config.timeout.count() <= 0) throw Error(ErrorCode::kInvalidArgument, "timeout must be positive");
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config.endpoint, m, url_re)) {
    throw Error(ErrorCode::kEndpointUnavailable, "endpoint '" + config.endpoint + "' is not an http URL");
  }
  const std::string base = m[1].str();
  const std::string path = m[2].matched ? m[2].str() : "/";

  httplib::Client client(base);
  const auto sec = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - sec);
  client.set_connection_timeout(sec.count(), usec.count());
  client.set_read_timeout(sec.count(), usec.count());
  client.set_write_timeout(sec.count(), usec.count());

  nlohmann::json body{{"prompt", prompt},
                      {"max_new_tokens", config.max_new_tokens},
                      {"temperature", config.temperature},
                      {"top_p", config.top_p},
                      {"top_k", config.top_k}};
  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const bool slow = std::chrono::steady_clock::now() - started >= config.timeout * 9 / 10;
    if (err == httplib::Error::ConnectionTimeout || (err == httplib::Error::Read && slow)) {
      throw Error(ErrorCode::kTimeout, "completion endpoint timed out after " +
                                           std::to_string(config.timeout.count()) + " ms");
    }
    throw Error(ErrorCode::kEndpointUnavailable,
                "completion endpoint unavailable: " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::kEndpointUnavailable,
                "completion endpoint returned HTTP " + std::to_string(res->status));
  }
  nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kMalformedResponse, "completion response is not a JSON object");
  }
  if (doc.contains("text") && doc["text"].is_string()) return doc["text"].get<std::string>();
  if (doc.contains("content") && doc["content"].is_string()) return doc["content"].get<std::string>();
  if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty() &&
      doc["choices"][0].is_object() && doc["choices"][0].contains("text") &&
      doc["choices"][0]["text"].is_string()) {
    return doc["choices"][0]["text"].get<std::string>();
  }
  throw Error(ErrorCode::kMalformedResponse, "completion response has no text field");
}

std::string invoke_lm(const std::string& prompt, const LmConfig& config) {
  HttpCompletionBackend backend;
  return backend.complete(prompt, config);
}

std::variant<InstructionScript, RepairReport> postprocess(std::string_view raw,
                                                          const TerseScript& expected) {
  static const std::regex line_re(R"(^(\d+)\. (.*\S))");
  InstructionScript guide;
  guide.source = NarrationSource::kLanguageModel;

  std::size_t pos = 0;
  while (pos <= raw.size()) {
    std::size_t end = raw.find('\n', pos);
    if (end == std::string_view::npos) end = raw.size();
    std::string line(raw.substr(pos, end - pos));
    pos = end + 1;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    line.erase(0, first);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    std::smatch m;
    if (std::regex_match(line, m, line_re)) {
      guide.lines.push_back({std::stoi(m[1].str()), m[2].str()});
    }
  }

  RepairReport report;
  if (expected.commands.empty()) report.violations.push_back("terse script is empty");
  if (guide.lines.empty()) report.violations.push_back("no numbered lines in completion");
  for (std::string& v : instruction_violations(guide, expected)) report.violations.push_back(std::move(v));
  if (!report.violations.empty()) return report;
  return guide;
}

InstructionScript narrate(const TerseScript& script, const NarrateOptions& options) {
  if (script.commands.empty()) throw Error(ErrorCode::kEmptyScript, "terse script is empty");
  if (options.mode == NarrationMode::kTemplate) return render_template(script);

  LmConfig config = options.lm;
  if (config.max_new_tokens <= 0) {
    config.max_new_tokens = 32 + 24 * static_cast<int>(script.commands.size());
  }
  std::vector<std::string> reasons;
  try {
    const std::string prompt = build_prompt(options.system, render_terse_block(script));
    HttpCompletionBackend http;
    CompletionBackend& backend = options.backend != nullptr ? *options.backend : http;
    const std::string raw = backend.complete(prompt, config);
    auto checked = postprocess(raw, script);
    if (auto* guide = std::get_if<InstructionScript>(&checked)) return std::move(*guide);
    reasons = std::move(std::get<RepairReport>(checked).violations);
  } catch (const Error& e) {
    reasons.push_back(std::string(error_code_name(e.code())) + ": " + e.what());
  }
  InstructionScript fallback = render_template(script);
  fallback.fallback_reasons = std::move(reasons);
  return fallback;
}

}  // namespace wayfind
