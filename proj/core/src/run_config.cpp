#include "mediabias/run_config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "mediabias/error.hpp"
#include "mediabias/presets.hpp"

namespace mediabias {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool inline_table_like(std::string_view value) { return trim(value).starts_with("{"); }

bool is_bare_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

class ValueParser {
 public:
  ValueParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  TomlValue parse_document_value() {
    skip_space();
    TomlValue v;
    if (peek() == '[') {
      v = parse_array();
    } else if (peek() == '"' || peek() == '\'') {
      v = parse_string();
    } else {
      v = parse_scalar();
    }
    skip_space_and_comment();
    if (pos_ != text_.size()) fail("unexpected trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  void skip_space_and_comment() {
    while (true) {
      skip_space();
      if (peek() != '#') return;
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    }
  }

  std::string parse_string() {
    const char quote = text_[pos_++];
    std::string out;
    while (true) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') fail("unterminated string");
      const char c = text_[pos_++];
      if (c == quote) return out;
      if (c == '\\' && quote == '"') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        const char e = text_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape '\\") + e + "'");
        }
      } else {
        out += c;
      }
    }
  }

  std::vector<std::string> parse_array() {
    ++pos_;
    std::vector<std::string> out;
    while (true) {
      skip_space_and_comment();
      if (peek() == ']') {
        ++pos_;
        return out;
      }
      if (peek() != '"' && peek() != '\'') fail("arrays may only hold strings");
      out.push_back(parse_string());
      skip_space_and_comment();
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  TomlValue parse_scalar() {
    const auto start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '#') {
      ++pos_;
    }
    std::string token(text_.substr(start, pos_ - start));
    if (token == "true") return true;
    if (token == "false") return false;
    std::erase(token, '_');
    if (token.empty()) fail("missing value");

    std::int64_t i;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), i);
    if (ec == std::errc() && p == token.data() + token.size()) return i;
    if (token.front() == '+') token.erase(0, 1);
    double d;
    auto [p2, ec2] = std::from_chars(token.data(), token.data() + token.size(), d);
    if (ec2 == std::errc() && p2 == token.data() + token.size()) return d;
    fail("cannot parse value '" + token + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

const std::string& expect_string(const std::string& key, const TomlValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError("key '" + key + "' must be a string");
}

std::int64_t expect_int(const std::string& key, const TomlValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw ConfigError("key '" + key + "' must be an integer");
}

double expect_number(const std::string& key, const TomlValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw ConfigError("key '" + key + "' must be a number");
}

bool expect_bool(const std::string& key, const TomlValue& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw ConfigError("key '" + key + "' must be true or false");
}

std::filesystem::path existing_path(const std::string& key, const TomlValue& v,
                                    const std::filesystem::path& base) {
  std::filesystem::path p = expect_string(key, v);
  if (p.is_relative()) p = base / p;
  if (!std::filesystem::exists(p)) {
    throw ConfigError("key '" + key + "' points to missing file '" + p.string() + "'");
  }
  return p;
}

}  // namespace

std::map<std::string, TomlValue> parse_flat_toml(std::string_view text) {
  std::map<std::string, TomlValue> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    const std::size_t first_line = line_no;
    pos = end + 1;

    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (body.front() == '[') throw ParseError(line_no, "tables are not supported in a flat config");

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (!is_bare_key(key)) throw ParseError(line_no, "invalid key '" + key + "'");

    // Arrays may continue over several lines until the closing bracket.
    std::string value(line.substr(eq + 1));
    if (trim(value).starts_with("[")) {
      auto depth_closed = [](const std::string& s) {
        bool in_str = false, in_comment = false;
        char q = 0;
        for (char c : s) {
          if (in_comment) {
            in_comment = c != '\n';
          } else if (in_str) {
            if (c == q) in_str = false;
          } else if (c == '"' || c == '\'') {
            in_str = true;
            q = c;
          } else if (c == '#') {
            in_comment = true;
          } else if (c == ']') {
            return true;
          }
        }
        return false;
      };
      while (!depth_closed(value) && pos < text.size()) {
        end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        value += '\n';
        value += text.substr(pos, end - pos);
        pos = end + 1;
      }
    }

    if (inline_table_like(value)) throw ParseError(first_line, "inline tables are not supported");
    ValueParser parser(value, first_line);
    auto parsed = parser.parse_document_value();
    if (!out.emplace(key, std::move(parsed)).second) {
      throw ParseError(first_line, "duplicate key '" + key + "'");
    }
  }
  return out;
}

RunConfig run_config_from_toml(std::string_view text, const std::filesystem::path& base_dir) {
  const auto doc = parse_flat_toml(text);
  RunConfig cfg;
  std::set<std::string> seen;
  for (const auto& [key, value] : doc) {
    if (key == "channels") {
      cfg.channels = existing_path(key, value, base_dir);
    } else if (key == "videos") {
      cfg.videos = existing_path(key, value, base_dir);
    } else if (key == "features") {
      cfg.features = existing_path(key, value, base_dir);
    } else if (key == "episodes") {
      cfg.episodes = existing_path(key, value, base_dir);
    } else if (key == "out") {
      cfg.out = expect_string(key, value);
      if (cfg.out.is_relative()) cfg.out = base_dir / cfg.out;
    } else if (key == "experiments") {
      const auto* list = std::get_if<std::vector<std::string>>(&value);
      if (!list) throw ConfigError("key 'experiments' must be an array of strings");
      cfg.experiments = *list;
      for (const auto& e : cfg.experiments) resolve_experiment(e);
    } else if (key == "seed") {
      const auto s = expect_int(key, value);
      if (s < 0) throw ConfigError("seed must be non-negative");
      cfg.options.seed = static_cast<std::uint64_t>(s);
    } else if (key == "folds") {
      cfg.options.folds = static_cast<int>(expect_int(key, value));
    } else if (key == "missing") {
      const auto policy = parse_missing_policy(expect_string(key, value));
      if (!policy) throw ConfigError("missing must be 'error' or 'zero_fill'");
      cfg.options.missing = *policy;
    } else if (key == "parallel_folds") {
      cfg.options.parallel_folds = expect_bool(key, value);
    } else if (key == "epochs") {
      cfg.options.train.epochs = static_cast<int>(expect_int(key, value));
    } else if (key == "batch_size") {
      cfg.options.train.batch_size = static_cast<int>(expect_int(key, value));
    } else if (key == "dropout_rate") {
      cfg.options.train.dropout_rate = expect_number(key, value);
    } else if (key == "learning_rate") {
      cfg.options.train.learning_rate = expect_number(key, value);
    } else if (key == "adagrad_epsilon") {
      cfg.options.train.adagrad_epsilon = expect_number(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
    seen.insert(key);
  }
  for (const char* required : {"channels", "videos"}) {
    if (!seen.contains(required)) throw ConfigError(std::string("missing config key '") + required + "'");
  }
  if (!seen.contains("out")) cfg.out = base_dir / cfg.out;
  cfg.options.train.validate();
  if (cfg.options.folds < 2) throw ConfigError("folds must be >= 2");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config '" + file.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return run_config_from_toml(buffer.str(), file.parent_path());
}

}  // namespace mediabias
