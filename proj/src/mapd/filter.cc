#include "emu/mapd/filter.h"

#include <cctype>
#include <charconv>
#include <functional>
#include <vector>

#include "emu/error.h"

namespace emu::mapd {

std::string Packet::summary() const {
  std::string out = "IP " + src.toString();
  if (protocol != "icmp" && srcPort) out += "." + std::to_string(srcPort);
  out += " > " + dst.toString();
  if (protocol != "icmp" && dstPort) out += "." + std::to_string(dstPort);
  if (protocol == "icmp") return out + ": ICMP echo request, length " + std::to_string(length);
  if (protocol == "tcp") return out + ": Flags [S], length " + std::to_string(length);
  return out + ": UDP, length " + std::to_string(length);
}

struct CaptureFilter::Expr {
  std::function<bool(const Packet&)> test;
};

namespace {

using ExprPtr = std::shared_ptr<const CaptureFilter::Expr>;

ExprPtr make(std::function<bool(const Packet&)> test) {
  return std::make_shared<const CaptureFilter::Expr>(CaptureFilter::Expr{std::move(test)});
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { tokenize(); }

  ExprPtr parse() {
    if (tokens_.empty()) fail("empty expression");
    ExprPtr expr = parseOr();
    if (pos_ != tokens_.size()) fail("unexpected '" + tokens_[pos_] + "'");
    return expr;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::kFilterRejected, "'" + std::string(text_) + "': " + why);
  }

  void tokenize() {
    size_t i = 0;
    while (i < text_.size()) {
      char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '(' || c == ')' || c == '!') {
        tokens_.emplace_back(1, c);
        ++i;
      } else if ((c == '&' || c == '|') && i + 1 < text_.size() && text_[i + 1] == c) {
        tokens_.push_back(c == '&' ? "and" : "or");
        i += 2;
      } else {
        size_t start = i;
        while (i < text_.size() && !std::isspace(static_cast<unsigned char>(text_[i])) && text_[i] != '(' &&
               text_[i] != ')') {
          ++i;
        }
        tokens_.emplace_back(text_.substr(start, i - start));
      }
    }
  }

  bool accept(std::string_view token) {
    if (pos_ < tokens_.size() && tokens_[pos_] == token) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& next(const char* what) {
    if (pos_ >= tokens_.size()) fail(std::string("expected ") + what);
    return tokens_[pos_++];
  }

  ExprPtr parseOr() {
    ExprPtr left = parseAnd();
    while (accept("or")) {
      ExprPtr right = parseAnd();
      left = make([left, right](const Packet& p) { return left->test(p) || right->test(p); });
    }
    return left;
  }

  ExprPtr parseAnd() {
    ExprPtr left = parseNot();
    while (accept("and")) {
      ExprPtr right = parseNot();
      left = make([left, right](const Packet& p) { return left->test(p) && right->test(p); });
    }
    return left;
  }

  ExprPtr parseNot() {
    if (accept("not") || accept("!")) {
      ExprPtr inner = parseNot();
      return make([inner](const Packet& p) { return !inner->test(p); });
    }
    return parsePrimary();
  }

  int number(const char* what) {
    const std::string& token = next(what);
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || value < 0) fail(std::string("bad ") + what);
    return value;
  }

  // tcp port 80, udp dst port 53
  bool qualifiesPort() const {
    size_t at = pos_;
    if (at < tokens_.size() && (tokens_[at] == "src" || tokens_[at] == "dst")) ++at;
    return at < tokens_.size() && tokens_[at] == "port";
  }

  ExprPtr parsePrimary() {
    if (accept("(")) {
      ExprPtr inner = parseOr();
      if (!accept(")")) fail("missing ')'");
      return inner;
    }
    for (const char* proto : {"icmp", "tcp", "udp"}) {
      if (accept(proto)) {
        std::string name = proto;
        ExprPtr match = make([name](const Packet& p) { return p.protocol == name; });
        if (name != "icmp" && qualifiesPort()) {
          ExprPtr port = parsePrimary();
          return make([match, port](const Packet& p) { return match->test(p) && port->test(p); });
        }
        return match;
      }
    }
    if (accept("ip")) return make([](const Packet&) { return true; });
    if (accept("less")) {
      int n = number("length");
      return make([n](const Packet& p) { return p.length <= n; });
    }
    if (accept("greater")) {
      int n = number("length");
      return make([n](const Packet& p) { return p.length >= n; });
    }

    enum { kEither, kSrc, kDst } dir = kEither;
    if (accept("src")) {
      dir = kSrc;
    } else if (accept("dst")) {
      dir = kDst;
    }
    auto pick = [dir](auto onSrc, auto onDst) {
      return make([dir, onSrc, onDst](const Packet& p) {
        if (dir == kSrc) return onSrc(p);
        if (dir == kDst) return onDst(p);
        return onSrc(p) || onDst(p);
      });
    };
    if (accept("host")) {
      auto address = Ipv4Address::parse(next("address"));
      if (!address) fail("bad host address");
      Ipv4Address a = *address;
      return pick([a](const Packet& p) { return p.src == a; }, [a](const Packet& p) { return p.dst == a; });
    }
    if (accept("net")) {
      auto prefix = Ipv4Prefix::parse(next("network"));
      if (!prefix) fail("bad network");
      Ipv4Prefix n = *prefix;
      return pick([n](const Packet& p) { return n.contains(p.src); }, [n](const Packet& p) { return n.contains(p.dst); });
    }
    if (accept("port")) {
      int port = number("port");
      if (port > 65535) fail("bad port");
      return pick([port](const Packet& p) { return p.protocol != "icmp" && p.srcPort == port; },
                  [port](const Packet& p) { return p.protocol != "icmp" && p.dstPort == port; });
    }
    if (pos_ < tokens_.size()) fail("unsupported primitive '" + tokens_[pos_] + "'");
    fail("unexpected end of expression");
  }

  std::string_view text_;
  std::vector<std::string> tokens_;
  size_t pos_ = 0;
};

}  // namespace

CaptureFilter CaptureFilter::parse(std::string_view expression) {
  CaptureFilter filter;
  filter.root_ = Parser(expression).parse();
  filter.text_ = std::string(expression);
  return filter;
}

bool CaptureFilter::matches(const Packet& packet) const { return root_ && root_->test(packet); }

}  // namespace emu::mapd
