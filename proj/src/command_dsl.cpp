#include "gridcraft/command_dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>

#include <nlohmann/json.hpp>

#include "gridcraft/error.hpp"

namespace gridcraft {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Cursor over one line of a script.
class LineScanner {
 public:
  LineScanner(std::string_view line, int line_no) : line_(line), line_no_(line_no) {}

  void skip_space() {
    while (pos_ < line_.size() && is_space(line_[pos_])) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }
  int column() const { return static_cast<int>(pos_) + 1; }

  [[noreturn]] void fail(const std::string& message, int column) const {
    throw ParseError(message, line_no_, column);
  }
  [[noreturn]] void fail(const std::string& message) const { fail(message, column()); }

  std::string_view word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < line_.size() && is_alpha(line_[pos_])) ++pos_;
    if (start == pos_) fail("expected a word");
    return line_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= line_.size() || line_[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  int integer() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < line_.size() && !is_space(line_[pos_]) && line_[pos_] != ',' &&
           line_[pos_] != ')' && line_[pos_] != '(') {
      ++pos_;
    }
    std::string_view tok = line_.substr(start, pos_ - start);
    const int col = static_cast<int>(start) + 1;
    if (tok.empty()) fail("expected an integer offset", col);
    int value = 0;
    auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || end != tok.data() + tok.size()) {
      fail("non-integer offset '" + std::string(tok) + "'", col);
    }
    return value;
  }

  Coord triple() {
    expect('(');
    Coord c;
    c.x = integer();
    expect(',');
    c.y = integer();
    expect(',');
    c.z = integer();
    expect(')');
    return c;
  }

 private:
  std::string_view line_;
  int line_no_;
  std::size_t pos_ = 0;
};

Command parse_line(std::string_view line, int line_no) {
  LineScanner scan(line, line_no);
  scan.skip_space();
  const int kw_col = scan.column();
  const std::string keyword = lower(scan.word());
  Command cmd;
  if (keyword == "place") {
    scan.skip_space();
    const int color_col = scan.column();
    std::string_view name = scan.word();
    auto color = color_from_name(name);
    if (!color) scan.fail("unknown color '" + std::string(name) + "'", color_col);
    cmd = Command::place(*color, scan.triple());
  } else if (keyword == "remove") {
    cmd = Command::remove(scan.triple());
  } else {
    scan.fail("unknown command '" + keyword + "'", kw_col);
  }
  if (!scan.at_end()) scan.fail("unexpected trailing text");
  return cmd;
}

}  // namespace

CommandScript parse_commands(std::string_view text) {
  CommandScript script;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    if (!std::all_of(line.begin(), line.end(), is_space)) {
      script.push_back(parse_line(line, line_no));
    }
    start = end + 1;
  }
  return script;
}

std::string emit_command(const Command& c) {
  std::string out = c.kind == CommandKind::Place
                        ? "place " + std::string(color_name(c.color)) + " ("
                        : std::string("remove (");
  out += std::to_string(c.offset.x) + "," + std::to_string(c.offset.y) + "," +
         std::to_string(c.offset.z) + ")";
  return out;
}

std::string emit_commands(const CommandScript& script) {
  std::string out;
  for (std::size_t i = 0; i < script.size(); ++i) {
    if (i) out += '\n';
    out += emit_command(script[i]);
  }
  return out;
}

Coord default_anchor(Dims dims) { return {dims.x / 2, 0, dims.z / 2}; }

VoxelGrid voxelize(const CommandScript& script, Coord anchor, Dims dims) {
  VoxelGrid grid(dims);
  if (!grid.in_zone(anchor)) throw OutOfZone("anchor is outside the build zone", 0);
  for (std::size_t i = 0; i < script.size(); ++i) {
    const Command& c = script[i];
    Coord cell = anchor + c.offset;
    if (!grid.in_zone(cell)) {
      throw OutOfZone("command " + std::to_string(i) + " (" + emit_command(c) +
                          ") lands outside the build zone",
                      i);
    }
    grid.set(cell, c.kind == CommandKind::Place ? c.color : Color::Empty);
  }
  return grid;
}

CommandScript relativize_blocks(const std::vector<BlockEvent>& events) {
  CommandScript script;
  if (events.empty()) return script;
  const Coord origin = events.front().pos;
  script.reserve(events.size());
  for (const BlockEvent& e : events) {
    Coord offset = e.pos - origin;
    script.push_back(e.kind == CommandKind::Place ? Command::place(e.color, offset)
                                                  : Command::remove(offset));
  }
  return script;
}

std::vector<TrainingPair> preprocess_dialog(const std::vector<DialogTurn>& turns, int context_k) {
  if (context_k < 0) throw ConfigError("context_k must be non-negative");

  // Base pairs first: instruction text and the block events that answered it.
  std::vector<TrainingPair> base;
  std::string instruction;
  std::vector<BlockEvent> group;
  auto flush = [&] {
    if (!instruction.empty() && !group.empty()) {
      base.push_back({std::string(kInstructionPrefix) + instruction,
                      emit_commands(relativize_blocks(group))});
    }
    instruction.clear();
    group.clear();
  };
  for (const DialogTurn& turn : turns) {
    if (turn.speaker == Speaker::Architect) {
      if (!group.empty()) flush();
      if (!turn.text.empty()) {
        if (!instruction.empty()) instruction += ' ';
        instruction += turn.text;
      }
    }
    group.insert(group.end(), turn.actions.begin(), turn.actions.end());
  }
  flush();

  std::vector<TrainingPair> pairs;
  pairs.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    std::string input;
    const std::size_t first = i > static_cast<std::size_t>(context_k) ? i - context_k : 0;
    for (std::size_t j = first; j < i; ++j) {
      input += base[j].input;
      input += kContextArrow;
      input += base[j].output;
      input += kContextSeparator;
    }
    input += base[i].input;
    pairs.push_back({std::move(input), base[i].output});
  }
  return pairs;
}

std::string rewrite_color_words(std::string_view text, const std::array<Color, 6>& mapping) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_alpha(text[i])) {
      out += text[i++];
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_alpha(text[j])) ++j;
    std::string_view word = text.substr(i, j - i);
    auto color = color_from_name(word);
    if (!color) {
      out += word;
    } else {
      std::string repl(color_name(mapping[static_cast<std::size_t>(*color) - 1]));
      const bool all_upper = std::all_of(word.begin(), word.end(), [](char c) {
        return std::isupper(static_cast<unsigned char>(c)) != 0;
      });
      if (all_upper && word.size() > 1) {
        for (char& c : repl) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      } else if (std::isupper(static_cast<unsigned char>(word[0]))) {
        repl[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(repl[0])));
      }
      out += repl;
    }
    i = j;
  }
  return out;
}

std::vector<TrainingPair> permute_colors(const TrainingPair& pair) {
  const CommandScript script = parse_commands(pair.output);
  std::array<int, 6> perm;
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<TrainingPair> out;
  out.reserve(720);
  do {
    std::array<Color, 6> mapping;
    for (std::size_t i = 0; i < 6; ++i) mapping[i] = kBlockColors[perm[i]];
    CommandScript mapped = script;
    for (Command& c : mapped) {
      if (c.kind == CommandKind::Place) c.color = mapping[static_cast<std::size_t>(c.color) - 1];
    }
    out.push_back({rewrite_color_words(pair.input, mapping), emit_commands(mapped)});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

DialogTurn dialog_turn_from_json_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed dialog line: ") + e.what());
  }
  DialogTurn turn;
  const std::string speaker = lower(j.at("speaker").get<std::string>());
  if (speaker == "architect") {
    turn.speaker = Speaker::Architect;
  } else if (speaker == "builder") {
    turn.speaker = Speaker::Builder;
  } else {
    throw ConfigError("unknown speaker '" + speaker + "'");
  }
  turn.text = j.value("text", std::string{});
  if (j.contains("actions")) {
    for (const auto& a : j.at("actions")) {
      if (!a.is_array() || a.size() < 4) throw ConfigError("action must be [kind,x,y,z,color]");
      BlockEvent e;
      const std::string kind = lower(a[0].get<std::string>());
      if (kind == "place") {
        e.kind = CommandKind::Place;
      } else if (kind == "remove") {
        e.kind = CommandKind::Remove;
      } else {
        throw ConfigError("unknown action kind '" + kind + "'");
      }
      e.pos = {a[1].get<int>(), a[2].get<int>(), a[3].get<int>()};
      if (a.size() > 4 && a[4].is_string()) {
        auto color = color_from_name(a[4].get<std::string>());
        if (!color) throw ConfigError("unknown color '" + a[4].get<std::string>() + "'");
        e.color = *color;
      }
      if (e.kind == CommandKind::Place && e.color == Color::Empty) {
        throw ConfigError("place action without a color");
      }
      turn.actions.push_back(e);
    }
  }
  return turn;
}

std::vector<DialogTurn> parse_dialog_jsonl(std::string_view text) {
  std::vector<DialogTurn> turns;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!std::all_of(line.begin(), line.end(), is_space)) {
      turns.push_back(dialog_turn_from_json_line(line));
    }
    start = end + 1;
  }
  return turns;
}

std::string training_pair_to_json_line(const TrainingPair& pair) {
  nlohmann::ordered_json j;
  j["input"] = pair.input;
  j["output"] = pair.output;
  return j.dump();
}

}  // namespace gridcraft
