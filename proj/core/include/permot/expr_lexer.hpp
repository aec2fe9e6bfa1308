#pragma once

#include <cctype>
#include <string>

#include "permot/error.hpp"

namespace permot {

struct Token {
  enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind = End;
  std::string text;
};

// Tokenizer shared by the field-element and period-scalar expression
// parsers.  Numbers are unsigned decimal integers; identifiers start with a
// letter or underscore and may contain digits, underscores and dots.
class ExprLexer {
 public:
  explicit ExprLexer(std::string text) : text_(std::move(text)) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  void expect(Token::Kind kind) {
    if (current_.kind != kind)
      throw DomainError("unexpected token '" + current_.text + "' in '" + text_ + "'");
    advance();
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) {
      current_ = {Token::End, ""};
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      // "2pii" style identifiers are not numbers.
      if (pos_ < text_.size() &&
          (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        current_ = {Token::Ident, text_.substr(start, pos_ - start)};
        return;
      }
      current_ = {Token::Number, text_.substr(start, pos_ - start)};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      current_ = {Token::Ident, text_.substr(start, pos_ - start)};
      return;
    }
    ++pos_;
    switch (c) {
      case '+': current_ = {Token::Plus, "+"}; return;
      case '-': current_ = {Token::Minus, "-"}; return;
      case '*': current_ = {Token::Star, "*"}; return;
      case '/': current_ = {Token::Slash, "/"}; return;
      case '^': current_ = {Token::Caret, "^"}; return;
      case '(': current_ = {Token::LParen, "("}; return;
      case ')': current_ = {Token::RParen, ")"}; return;
      default:
        throw DomainError(std::string("unexpected character '") + c + "' in '" + text_ + "'");
    }
  }

  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  }

  std::string text_;
  std::size_t pos_ = 0;
  Token current_;
};

}  // namespace permot
