#include "yardstick/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "yardstick/errors.hpp"
#include "yardstick/numeric.hpp"

namespace yardstick {
namespace {

class ValueParser {
public:
    ValueParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    nlohmann::json parse() {
        auto v = value();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing characters");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("line " + std::to_string(line_) + ": " + what);
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    nlohmann::json value() {
        skip_space();
        if (pos_ >= text_.size()) fail("missing value");
        const char c = text_[pos_];
        if (c == '[') return array();
        if (c == '"') return string();
        return scalar();
    }

    nlohmann::json array() {
        ++pos_;
        nlohmann::json out = nlohmann::json::array();
        while (true) {
            skip_space();
            if (pos_ >= text_.size()) fail("unterminated array");
            if (text_[pos_] == ']') {
                ++pos_;
                return out;
            }
            out.push_back(value());
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
            } else if (pos_ >= text_.size() || text_[pos_] != ']') {
                fail("expected ',' or ']' in array");
            }
        }
    }

    nlohmann::json string() {
        ++pos_;
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            char c = text_[pos_++];
            if (c == '\\') {
                if (pos_ >= text_.size()) break;
                const char e = text_[pos_++];
                switch (e) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case '"': c = '"'; break;
                    case '\\': c = '\\'; break;
                    default: fail(std::string("unsupported escape \\") + e);
                }
            }
            out.push_back(c);
        }
        if (pos_ >= text_.size()) fail("unterminated string");
        ++pos_;
        return out;
    }

    nlohmann::json scalar() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '#' &&
               !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        std::string token(text_.substr(start, pos_ - start));
        if (token == "true") return true;
        if (token == "false") return false;
        std::erase(token, '_');
        if (token.empty()) fail("missing value");
        const bool integral = token.find_first_of(".eE") == std::string::npos && token != "inf" &&
                              token != "+inf" && token != "-inf" && token != "nan";
        if (integral) {
            std::string_view digits(token);
            if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
            if (!digits.empty() && digits.front() == '-') {
                long long v = 0;
                auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
                if (ec == std::errc{} && p == digits.data() + digits.size()) return v;
            } else {
                unsigned long long v = 0;
                auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
                if (ec == std::errc{} && p == digits.data() + digits.size()) return v;
            }
            fail("invalid integer '" + token + "'");
        }
        double v = 0.0;
        if (!parse_decimal(token, v)) fail("invalid value '" + token + "'");
        return v;
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

int bracket_balance(std::string_view s) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const char c = s[k];
        if (in_string) {
            if (c == '\\') {
                ++k;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        } else if (c == '#') {
            while (k + 1 < s.size() && s[k + 1] != '\n') ++k;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']') {
            --depth;
        }
    }
    return depth;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

nlohmann::json parse_flat_toml(std::string_view text) {
    nlohmann::json out = nlohmann::json::object();
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t key_line = line_no;
        auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        if (body.front() == '[') {
            throw ConfigError("line " + std::to_string(key_line) + ": tables are not supported");
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(key_line) + ": expected 'key = value'");
        }
        std::string key(trim(body.substr(0, eq)));
        if (key.size() >= 2 && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
        if (key.empty()) throw ConfigError("line " + std::to_string(key_line) + ": empty key");
        std::string value(body.substr(eq + 1));
        int depth = bracket_balance(value);
        while (depth > 0 && std::getline(in, line)) {
            ++line_no;
            value += '\n';
            value += line;
            depth = bracket_balance(value);
        }
        if (out.contains(key)) throw ConfigError("line " + std::to_string(key_line) + ": duplicate key '" + key + "'");
        out[key] = ValueParser(value, key_line).parse();
    }
    return out;
}

nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
            return nlohmann::json::parse(text);
        }
        return parse_flat_toml(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace yardstick
