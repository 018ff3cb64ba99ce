#include "json_lines.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <set>
#include <vector>

#include "oscal/io.hpp"

namespace oscal::detail {

namespace {

struct Cursor {
  std::size_t line = 1;
  std::size_t last_token_line = 1;  // line of the last non-blank character read
};

// Char iterator that keeps line counts as the parser consumes input.
class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator(const char* p, Cursor* c) : p_(p), c_(c) {}
  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    if (*p_ == '\n') {
      ++c_->line;
    } else if (!std::isspace(static_cast<unsigned char>(*p_))) {
      c_->last_token_line = c_->line;
    }
    ++p_;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator old = *this;
    ++*this;
    return old;
  }
  friend bool operator==(const CountingIterator& a, const CountingIterator& b) { return a.p_ == b.p_; }
  friend bool operator!=(const CountingIterator& a, const CountingIterator& b) { return a.p_ != b.p_; }

 private:
  const char* p_;
  Cursor* c_;
};

std::size_t line_at(std::string_view text, std::size_t byte) {
  // an error at end of input belongs to the last line with content
  std::size_t end = text.find_last_not_of(" \t\r\n");
  if (end != std::string_view::npos) byte = std::min(byte, end + 1);
  std::size_t line = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

class LineRecorder : public nlohmann::json_sax<Json> {
 public:
  LineRecorder(const Cursor* cursor, std::map<std::string, std::size_t>* lines, std::string_view text)
      : cursor_(cursor), lines_(lines), text_(text) {}

  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t&) override { return scalar(); }
  bool binary(binary_t&) override { return scalar(); }

  bool start_object(std::size_t) override {
    record();
    frames_.push_back({false, 0, {}, {}});
    return true;
  }
  bool key(string_t& k) override {
    Frame& f = frames_.back();
    if (!f.seen.insert(k).second) {
      throw DocumentError(cursor_->last_token_line, "duplicate key \"" + k + "\"");
    }
    f.key = k;
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override {
    record();
    frames_.push_back({true, 0, {}, {}});
    return true;
  }
  bool end_array() override { return close(); }

  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
    std::string what = ex.what();
    auto cut = what.find("syntax error");
    throw DocumentError(line_at(text_, position), cut == std::string::npos ? what : what.substr(cut));
  }

 private:
  struct Frame {
    bool array;
    std::size_t index;
    std::string key;
    std::set<std::string> seen;
  };

  std::string here() const {
    std::string p;
    for (const Frame& f : frames_) p += "/" + (f.array ? std::to_string(f.index) : pointer_token(f.key));
    return p;
  }
  void record() { lines_->emplace(here(), cursor_->last_token_line); }
  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }
  bool scalar() {
    record();
    advance();
    return true;
  }
  bool close() {
    frames_.pop_back();
    advance();
    return true;
  }

  const Cursor* cursor_;
  std::map<std::string, std::size_t>* lines_;
  std::string_view text_;
  std::vector<Frame> frames_;
};

}  // namespace

std::string pointer_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::size_t LocatedJson::line_of(std::string pointer) const {
  for (;;) {
    auto it = lines.find(pointer);
    if (it != lines.end()) return it->second;
    auto cut = pointer.rfind('/');
    if (cut == std::string::npos) return 1;
    pointer.erase(cut);
  }
}

LocatedJson parse_located(std::string_view text) {
  LocatedJson out;
  Cursor cursor;
  LineRecorder recorder(&cursor, &out.lines, text);
  CountingIterator first(text.data(), &cursor), last(text.data() + text.size(), &cursor);
  Json::sax_parse(first, last, &recorder);
  out.value = Json::parse(text);
  return out;
}

}  // namespace oscal::detail
