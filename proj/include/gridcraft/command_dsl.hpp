#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gridcraft/voxel.hpp"

namespace gridcraft {

// Textual building commands, one per line:
//
//   script  := (command NEWLINE)*
//   command := "place" color "(" int "," int "," int ")"
//            | "remove" "(" int "," int "," int ")"
//
// Keywords and colour names are case-insensitive; emission is lowercase.
// Offsets are relative to the starting block.

enum class CommandKind { Place, Remove };

struct Command {
  CommandKind kind = CommandKind::Place;
  Coord offset;
  Color color = Color::Empty;  // Empty for Remove

  static Command place(Color color, Coord offset) { return {CommandKind::Place, offset, color}; }
  static Command remove(Coord offset) { return {CommandKind::Remove, offset, Color::Empty}; }

  friend bool operator==(const Command&, const Command&) = default;
};

using CommandScript = std::vector<Command>;

// Throws ParseError carrying the 1-based line and column.
CommandScript parse_commands(std::string_view text);
std::string emit_commands(const CommandScript& script);
std::string emit_command(const Command& command);

// Anchor used when a script is voxelized without one: (X/2, 0, Z/2).
Coord default_anchor(Dims dims);

// Applies commands in order at anchor + offset (last write wins).
// Throws OutOfZone naming the offending command index.
VoxelGrid voxelize(const CommandScript& script, Coord anchor, Dims dims = kDefaultDims);

struct BlockEvent {
  CommandKind kind = CommandKind::Place;
  Coord pos;
  Color color = Color::Empty;

  friend bool operator==(const BlockEvent&, const BlockEvent&) = default;
};

// Offsets become relative to the first event's cell.
CommandScript relativize_blocks(const std::vector<BlockEvent>& events);

// ---- dialog preprocessing ----------------------------------------------

inline constexpr std::string_view kInstructionPrefix = "implement given instructions: ";
inline constexpr std::string_view kContextArrow = " => ";
inline constexpr std::string_view kContextSeparator = " ; ";

enum class Speaker { Architect, Builder };

struct DialogTurn {
  Speaker speaker = Speaker::Architect;
  std::string text;
  std::vector<BlockEvent> actions;  // block events that followed this utterance
};

struct TrainingPair {
  std::string input;
  std::string output;

  friend bool operator==(const TrainingPair&, const TrainingPair&) = default;
};

// Builder utterances are dropped; the architect utterances preceding each
// group of block events become one prefixed instruction. Each input is
// preceded by the last `context_k` pairs rendered as "<input> => <output>"
// and joined with " ; ".
std::vector<TrainingPair> preprocess_dialog(const std::vector<DialogTurn>& turns,
                                            int context_k = 3);

// One output per permutation of the six colours (6! = 720, identity first,
// lexicographic over kBlockColors). Colour words in the input are rewritten
// by the same permutation.
std::vector<TrainingPair> permute_colors(const TrainingPair& pair);

// Whole-word, case-insensitive colour renaming; `mapping[i]` is the image of
// kBlockColors[i]. Capitalisation of each rewritten word is preserved.
std::string rewrite_color_words(std::string_view text, const std::array<Color, 6>& mapping);

// JSON-lines codecs for dialog logs and training pairs.
DialogTurn dialog_turn_from_json_line(std::string_view line);
std::vector<DialogTurn> parse_dialog_jsonl(std::string_view text);
std::string training_pair_to_json_line(const TrainingPair& pair);

}  // namespace gridcraft
