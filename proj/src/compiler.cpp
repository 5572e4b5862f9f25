#include <charconv>

#include "ludilite/engine.hpp"

namespace ludilite {

const char* to_string(CompileError::Kind kind) {
  switch (kind) {
    case CompileError::Kind::kLex: return "lex";
    case CompileError::Kind::kStructural: return "structural";
    case CompileError::Kind::kSemantic: return "semantic";
  }
  return "?";
}

std::string CompileError::describe() const {
  return std::string(to_string(kind)) + " error at offset " + std::to_string(offset) + ": " +
         message;
}

namespace {

struct CompileFailure {
  CompileError error;
};

[[noreturn]] void structural(std::size_t offset, std::string message) {
  throw CompileFailure{{CompileError::Kind::kStructural, offset, std::move(message)}};
}

[[noreturn]] void semantic(std::size_t offset, std::string message) {
  throw CompileFailure{{CompileError::Kind::kSemantic, offset, std::move(message)}};
}

// Recursive descent over the token stream, in the same shape as the LudiLite
// grammar file so that everything compiled here is also grammatical.
class Compiler {
 public:
  Compiler(const std::vector<Token>& tokens, std::size_t text_size)
      : tokens_(tokens), text_size_(text_size) {}

  GameSpec game() {
    GameSpec spec;
    open("game");
    spec.name = std::string(expect(TokenKind::kString, "game name").unquoted());
    players(spec);
    equipment(spec);
    rules(spec);
    close();
    if (pos_ != tokens_.size()) structural(tokens_[pos_].offset, "trailing input after game");
    return spec;
  }

 private:
  void players(GameSpec& spec) {
    open("players");
    const Token& count = peek_token();
    spec.num_players = integer("player count");
    if (spec.num_players < 1) semantic(count.offset, "players must be >= 1");
    if (spec.num_players > kMaxPlayers) {
      semantic(count.offset, "players must be <= " + std::to_string(kMaxPlayers));
    }
    close();
  }

  void equipment(GameSpec& spec) {
    const std::size_t start = open("equipment");
    expect(TokenKind::kOpenBrace, "'{'");
    bool have_board = false;
    do {
      const std::size_t item_start = expect(TokenKind::kOpenParen, "'('").offset;
      const Token& head = expect(TokenKind::kWord, "equipment item");
      if (head.text == "board") {
        if (have_board) semantic(item_start, "exactly one board is allowed");
        board(spec);
        have_board = true;
      } else if (head.text == "piece") {
        piece(spec);
      } else {
        structural(head.offset, "unknown equipment item '" + head.text + "'");
      }
      close();
    } while (at(TokenKind::kOpenParen));
    expect(TokenKind::kCloseBrace, "'}'");
    close();
    if (!have_board) semantic(start, "equipment must declare a board");
    if (spec.pieces.empty()) semantic(start, "equipment must declare at least one piece");
  }

  void board(GameSpec& spec) {
    expect(TokenKind::kOpenParen, "'('");
    const Token& shape = expect(TokenKind::kWord, "board shape");
    const Token& first = peek_token();
    if (shape.text == "square") {
      spec.rows = spec.cols = integer("square size");
      if (spec.rows < 1) semantic(first.offset, "square size must be >= 1");
    } else if (shape.text == "rectangle") {
      spec.rows = integer("rectangle rows");
      const Token& second = peek_token();
      spec.cols = integer("rectangle columns");
      if (spec.rows < 1) semantic(first.offset, "rectangle rows must be >= 1");
      if (spec.cols < 1) semantic(second.offset, "rectangle columns must be >= 1");
    } else {
      structural(shape.offset, "unknown board shape '" + shape.text + "'");
    }
    if (static_cast<long long>(spec.rows) * spec.cols > kMaxSites) {
      semantic(first.offset, "board exceeds " + std::to_string(kMaxSites) + " sites");
    }
    close();
  }

  void piece(GameSpec& spec) {
    PieceSpec piece;
    piece.name = std::string(expect(TokenKind::kString, "piece name").unquoted());
    const Token& owner = expect(TokenKind::kWord, "piece owner");
    if (owner.text == "Each") {
      piece.ownership = Ownership::kEach;
    } else if (owner.text == "Shared") {
      piece.ownership = Ownership::kShared;
    } else {
      structural(owner.offset, "unknown piece owner '" + owner.text + "'");
    }
    spec.pieces.push_back(std::move(piece));
  }

  void rules(GameSpec& spec) {
    open("rules");
    open("play");
    open("move");
    keyword("Add");
    open("to");
    open("sites");
    keyword("Empty");
    close();
    close();
    close();
    close();
    end(spec);
    close();
  }

  void end(GameSpec& spec) {
    open("end");
    const bool braced = at(TokenKind::kOpenBrace);
    if (braced) ++pos_;
    do {
      spec.end_rules.push_back(condition(spec));
    } while (at(TokenKind::kOpenParen));
    if (braced) expect(TokenKind::kCloseBrace, "'}'");
    close();
  }

  EndRule condition(const GameSpec& spec) {
    EndRule rule;
    open("if");
    open("is");
    const Token& test = expect(TokenKind::kWord, "end condition");
    if (test.text == "Line") {
      rule.condition = EndCondition::kLine;
      const Token& length = peek_token();
      rule.line_length = integer("line length");
      if (rule.line_length < 1) semantic(length.offset, "line length must be >= 1");
    } else if (test.text == "Full") {
      rule.condition = EndCondition::kFull;
    } else {
      structural(test.offset, "unknown end condition '" + test.text + "'");
    }
    close();

    open("result");
    const Token& role = expect(TokenKind::kWord, "result role");
    if (role.text == "Mover") {
      rule.role = Role::kMover;
    } else if (role.text == "All") {
      rule.role = Role::kAll;
    } else {
      structural(role.offset, "unknown role '" + role.text + "'");
    }
    const Token& outcome = expect(TokenKind::kWord, "result outcome");
    if (outcome.text == "Win") {
      rule.result = ResultKind::kWin;
    } else if (outcome.text == "Loss") {
      rule.result = ResultKind::kLoss;
    } else if (outcome.text == "Draw") {
      rule.result = ResultKind::kDraw;
    } else {
      structural(outcome.offset, "unknown outcome '" + outcome.text + "'");
    }
    if (rule.role == Role::kAll && rule.result != ResultKind::kDraw) {
      semantic(role.offset, "role All only supports Draw");
    }
    if (rule.role == Role::kMover && rule.result == ResultKind::kLoss && spec.num_players != 2) {
      semantic(outcome.offset, "Mover Loss requires exactly 2 players");
    }
    close();
    close();
    return rule;
  }

  // -- token helpers --

  bool at(TokenKind kind) const { return pos_ < tokens_.size() && tokens_[pos_].kind == kind; }

  const Token& peek_token() const {
    if (pos_ < tokens_.size()) return tokens_[pos_];
    end_token_ = Token{TokenKind::kWord, "", text_size_};
    return end_token_;
  }

  const Token& expect(TokenKind kind, const char* what) {
    if (pos_ >= tokens_.size()) structural(text_size_, std::string("expected ") + what + ", got end of input");
    const Token& token = tokens_[pos_];
    if (token.kind != kind) {
      structural(token.offset, std::string("expected ") + what + ", got '" + token.text + "'");
    }
    ++pos_;
    return token;
  }

  void keyword(const char* word) {
    const Token& token = expect(TokenKind::kWord, (std::string("'") + word + "'").c_str());
    if (token.text != word) {
      structural(token.offset, std::string("expected '") + word + "', got '" + token.text + "'");
    }
  }

  std::size_t open(const char* head) {
    const std::size_t offset = expect(TokenKind::kOpenParen, "'('").offset;
    keyword(head);
    return offset;
  }

  void close() { expect(TokenKind::kCloseParen, "')'"); }

  int integer(const char* what) {
    const Token& token = expect(TokenKind::kInteger, what);
    std::string_view digits = token.text;
    if (!digits.empty() && digits[0] == '+') digits.remove_prefix(1);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
      semantic(token.offset, std::string(what) + " out of range");
    }
    return value;
  }

  const std::vector<Token>& tokens_;
  std::size_t text_size_;
  std::size_t pos_ = 0;
  mutable Token end_token_{TokenKind::kWord, "", 0};
};

}  // namespace

CompileResult compile(std::string_view text) {
  const LexResult lexed = lex(text);
  if (lexed.error) {
    return CompileError{CompileError::Kind::kLex, lexed.error->offset, lexed.error->message};
  }
  try {
    return Compiler(lexed.tokens, text.size()).game();
  } catch (const CompileFailure& failure) {
    return failure.error;
  }
}

}  // namespace ludilite
