#include "vecagg/problem.hpp"

#include <cctype>
#include <sstream>

namespace vecagg {

namespace {

struct Cursor {
  std::vector<std::pair<long, std::string>> lines;  // (line number, content)
  size_t pos = 0;

  explicit Cursor(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long no = 0;
    while (std::getline(in, line)) {
      ++no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      bool blank = true;
      for (char ch : line) {
        if (!isspace(static_cast<unsigned char>(ch))) blank = false;
      }
      if (!blank) lines.emplace_back(no, line);
    }
  }

  bool done() const { return pos >= lines.size(); }

  const std::pair<long, std::string>& next(const char* what) {
    if (done()) {
      long last = lines.empty() ? 1 : lines.back().first;
      throw ParseError(std::string("unexpected end of file, expected ") + what, last);
    }
    return lines[pos++];
  }

  const std::pair<long, std::string>& peek() const { return lines[pos]; }
};

std::vector<long long> numbers_or_throw(const std::string& line, long no,
                                        const char* what) {
  std::istringstream in(line);
  std::vector<long long> out;
  long long v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) {
    std::string tail;
    in.clear();
    in >> tail;
    throw ParseError("expected " + std::string(what) + ", found '" + tail + "'", no);
  }
  return out;
}

Matrix read_rows(Cursor& cursor, const Field& field, int rows, int cols,
                 const char* name, std::vector<std::string>& warnings) {
  Matrix m(field, rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto& [no, line] = cursor.next(name);
    auto nums = numbers_or_throw(line, no, name);
    if (static_cast<int>(nums.size()) != cols) {
      throw ParseError(std::string(name) + " row has " + std::to_string(nums.size()) +
                       " entries, expected " + std::to_string(cols), no);
    }
    for (int c = 0; c < cols; ++c) {
      if (nums[c] < 0 || nums[c] >= static_cast<long long>(field.q())) {
        warnings.push_back("line " + std::to_string(no) + ": entry " +
                           std::to_string(nums[c]) + " reduced mod " +
                           std::to_string(field.q()));
      }
      m(r, c) = field.reduce(nums[c]);
    }
  }
  return m;
}

}  // namespace

Problem parse_problem(const std::string& text) {
  Cursor cursor(text);
  std::vector<std::string> warnings;

  const auto& [head_no, head] = cursor.next("header 'q K M N'");
  auto nums = numbers_or_throw(head, head_no, "header 'q K M N'");
  if (nums.size() != 4) {
    throw ParseError("header must be 'q K M N'", head_no);
  }
  long long q = nums[0], k = nums[1], m = nums[2], n = nums[3];
  if (q < 2 || q > INT32_MAX) throw ParseError("q out of range", head_no);
  if (k < 1 || k > 64) throw ParseError("user count K out of range", head_no);
  if (m < 1 || m > k) throw ParseError("row count M out of range", head_no);
  if (n < 0 || n > 64) throw ParseError("row count N out of range", head_no);

  Field field(static_cast<uint32_t>(q));  // throws UsageError if composite

  Matrix f = read_rows(cursor, field, static_cast<int>(m), static_cast<int>(k), "F row",
                       warnings);

  Matrix g(field, 0, static_cast<int>(k));
  bool identity = false;
  if (!cursor.done()) {
    std::istringstream probe(cursor.peek().second);
    std::string tok;
    probe >> tok;
    if (tok == "identity") {
      const auto& [no, line] = cursor.next("G block");
      std::string extra;
      std::istringstream rest(line);
      rest >> tok >> extra;
      if (!extra.empty()) throw ParseError("'identity' takes no arguments", no);
      if (n != k) {
        throw ParseError("'identity' requires N = K, but N=" + std::to_string(n) +
                         " and K=" + std::to_string(k), no);
      }
      g = Matrix::identity(field, static_cast<int>(k));
      identity = true;
    }
  }
  if (!identity) {
    g = read_rows(cursor, field, static_cast<int>(n), static_cast<int>(k), "G row",
                  warnings);
  }

  int len = 1;
  if (!cursor.done()) {
    const auto& [no, line] = cursor.next("optional 'L <value>'");
    std::istringstream in(line);
    std::string label;
    long long value = 0;
    in >> label >> value;
    if (label != "L" || value < 1) {
      throw ParseError("expected optional trailing 'L <value>', found '" + line + "'", no);
    }
    if (!cursor.done()) {
      throw ParseError("unexpected content after 'L' line", cursor.peek().first);
    }
    len = static_cast<int>(value);
  }

  return {AggregationSpec::make(field, f, g, len), std::move(warnings)};
}

}  // namespace vecagg
