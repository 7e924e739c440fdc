#include "marchsim/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "marchsim/error.hpp"

namespace marchsim {

SignalTrace::SignalTrace(std::vector<SignalInfo> signals) : signals_(std::move(signals)) {
  for (std::size_t i = 0; i < signals_.size(); ++i) {
    const auto &s = signals_[i];
    if (s.name.empty()) throw Error(ErrorKind::InvalidArgument, "signal name must not be empty");
    if (s.width == 0 || s.width > 64) throw Error(ErrorKind::InvalidArgument, "signal '" + s.name + "' width out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (signals_[j].name == s.name) throw Error(ErrorKind::InvalidArgument, "duplicate signal '" + s.name + "'");
    }
  }
  columns_.resize(signals_.size());
}

std::optional<std::size_t> SignalTrace::find(std::string_view name) const {
  for (std::size_t i = 0; i < signals_.size(); ++i) {
    if (signals_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t SignalTrace::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorKind::UnknownName, "trace has no signal '" + std::string(name) + "'");
}

void SignalTrace::append(std::span<const std::uint64_t> row) {
  if (row.size() != signals_.size())
    throw Error(ErrorKind::InvalidArgument, "trace row has " + std::to_string(row.size()) + " values, expected " +
                                                std::to_string(signals_.size()));
  for (std::size_t i = 0; i < row.size(); ++i) columns_[i].push_back(row[i]);
  ++length_;
}

void SignalTrace::truncate(std::size_t cycles) {
  if (cycles >= length_) return;
  for (auto &c : columns_) c.resize(cycles);
  length_ = cycles;
}

namespace {

std::string vcd_id(std::size_t index) {
  std::string id;
  do {
    id += static_cast<char>('!' + index % 94);
    index /= 94;
  } while (index > 0);
  return id;
}

std::string binary(std::uint64_t v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s += static_cast<char>('0' + (v & 1U));
    v >>= 1;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

void emit_value(std::string &out, const SignalInfo &s, std::uint64_t v, const std::string &id) {
  if (s.width == 1) {
    out += (v & 1U) ? '1' : '0';
    out += id;
  } else {
    out += 'b';
    out += binary(v);
    out += ' ';
    out += id;
  }
  out += '\n';
}

std::uint64_t parse_u64(std::string_view t, const char *what) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size())
    throw Error(ErrorKind::Parse, std::string("bad ") + what + " '" + std::string(t) + "'");
  return v;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t at = line.find(sep, start);
    out.emplace_back(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string write_vcd(const SignalTrace &trace, std::string_view scope) {
  if (trace.empty()) throw Error(ErrorKind::InvalidArgument, "cannot export an empty trace");
  const auto &signals = trace.signals();
  std::string out;
  out += "$version marchsim $end\n";
  for (const auto &[k, v] : trace.meta()) out += "$comment meta " + k + "=" + v + " $end\n";
  out += "$timescale 1ns $end\n";
  out += "$scope module " + std::string(scope) + " $end\n";
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    ids.push_back(vcd_id(i));
    const auto &s = signals[i];
    if (s.width == 1) {
      out += "$var wire 1 " + ids[i] + " " + s.name + " $end\n";
    } else {
      out += "$var reg " + std::to_string(s.width) + " " + ids[i] + " " + s.name + " [" +
             std::to_string(s.width - 1) + ":0] $end\n";
    }
  }
  out += "$upscope $end\n";
  for (const auto &s : signals) {
    if (!s.is_enum()) continue;
    out += "$comment enum " + s.name;
    for (const auto &label : s.enumerants) out += " " + label;
    out += " $end\n";
  }
  out += "$enddefinitions $end\n";
  out += "#0\n$dumpvars\n";
  for (std::size_t i = 0; i < signals.size(); ++i) emit_value(out, signals[i], trace.value(i, 0), ids[i]);
  out += "$end\n";
  for (std::size_t t = 1; t < trace.length(); ++t) {
    bool stamped = false;
    for (std::size_t i = 0; i < signals.size(); ++i) {
      if (trace.value(i, t) == trace.value(i, t - 1)) continue;
      if (!stamped) {
        out += "#" + std::to_string(t) + "\n";
        stamped = true;
      }
      emit_value(out, signals[i], trace.value(i, t), ids[i]);
    }
  }
  out += "#" + std::to_string(trace.length()) + "\n";
  return out;
}

SignalTrace read_vcd(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);

  std::vector<SignalInfo> signals;
  std::vector<std::string> ids;
  std::map<std::string, std::string> meta;
  std::size_t i = 0;
  auto until_end = [&](std::size_t from) {
    std::vector<std::string> body;
    std::size_t j = from;
    while (j < tokens.size() && tokens[j] != "$end") body.push_back(tokens[j++]);
    if (j == tokens.size()) throw Error(ErrorKind::Parse, "VCD: unterminated section");
    i = j + 1;
    return body;
  };

  bool definitions_done = false;
  while (i < tokens.size() && !definitions_done) {
    const std::string &t = tokens[i];
    if (t == "$var") {
      auto body = until_end(i + 1);
      if (body.size() < 4) throw Error(ErrorKind::Parse, "VCD: malformed $var");
      SignalInfo s;
      s.width = static_cast<unsigned>(parse_u64(body[1], "VCD width"));
      s.name = body[3];
      signals.push_back(s);
      ids.push_back(body[2]);
    } else if (t == "$comment") {
      auto body = until_end(i + 1);
      if (body.size() >= 2 && body[0] == "meta") {
        auto eq = body[1].find('=');
        if (eq != std::string::npos) meta[body[1].substr(0, eq)] = body[1].substr(eq + 1);
      } else if (body.size() >= 2 && body[0] == "enum") {
        for (auto &s : signals) {
          if (s.name == body[1]) s.enumerants.assign(body.begin() + 2, body.end());
        }
      }
    } else if (t == "$enddefinitions") {
      until_end(i + 1);
      definitions_done = true;
    } else if (t.size() > 1 && t[0] == '$') {
      until_end(i + 1);
    } else {
      throw Error(ErrorKind::Parse, "VCD: unexpected token '" + t + "' in header");
    }
  }
  if (!definitions_done) throw Error(ErrorKind::Parse, "VCD: missing $enddefinitions");

  std::map<std::string, std::size_t> by_id;
  for (std::size_t k = 0; k < ids.size(); ++k) by_id[ids[k]] = k;
  auto lookup = [&](const std::string &id) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error(ErrorKind::Parse, "VCD: unknown identifier '" + id + "'");
    return it->second;
  };

  SignalTrace trace(signals);
  trace.meta() = meta;
  std::vector<std::uint64_t> current(signals.size(), 0);
  std::uint64_t time = 0;
  bool started = false;
  auto flush_until = [&](std::uint64_t next_time) {
    // Emits rows for [time, next_time) holding the current values.
    for (std::uint64_t t = time; t < next_time; ++t) trace.append(current);
    time = next_time;
  };

  for (; i < tokens.size(); ++i) {
    const std::string &t = tokens[i];
    if (t[0] == '#') {
      std::uint64_t next = parse_u64(std::string_view(t).substr(1), "VCD timestamp");
      if (started && next < time) throw Error(ErrorKind::Parse, "VCD: time goes backwards");
      if (started) flush_until(next);
      time = next;
      started = true;
    } else if (t == "$dumpvars" || t == "$end" || t == "$dumpall" || t == "$dumpon" || t == "$dumpoff") {
      continue;
    } else if (t[0] == 'b' || t[0] == 'B') {
      if (i + 1 >= tokens.size()) throw Error(ErrorKind::Parse, "VCD: vector value without identifier");
      std::uint64_t v = 0;
      for (char c : std::string_view(t).substr(1)) v = (v << 1) | (c == '1' ? 1U : 0U);
      current[lookup(tokens[++i])] = v;
    } else if (t[0] == 'r' || t[0] == 'R') {
      ++i;
    } else if (t[0] == '0' || t[0] == '1' || t[0] == 'x' || t[0] == 'X' || t[0] == 'z' || t[0] == 'Z') {
      current[lookup(t.substr(1))] = t[0] == '1' ? 1 : 0;
    } else {
      throw Error(ErrorKind::Parse, "VCD: unexpected token '" + t + "'");
    }
  }
  // The final timestamp marks the end of simulation; no row is emitted for it.
  return trace;
}

std::string write_csv(const SignalTrace &trace) {
  std::string out;
  for (const auto &[k, v] : trace.meta()) out += "# meta " + k + "=" + v + "\n";
  for (const auto &s : trace.signals()) {
    out += "# signal " + s.name + " " + std::to_string(s.width);
    for (const auto &label : s.enumerants) out += " " + label;
    out += "\n";
  }
  out += "cycle";
  for (const auto &s : trace.signals()) out += "," + s.name;
  out += "\n";
  for (std::size_t t = 0; t < trace.length(); ++t) {
    out += std::to_string(t);
    for (std::size_t i = 0; i < trace.signal_count(); ++i) {
      const auto &s = trace.signals()[i];
      const std::uint64_t v = trace.value(i, t);
      out += ',';
      out += s.is_enum() && v < s.enumerants.size() ? s.enumerants[v] : std::to_string(v);
    }
    out += "\n";
  }
  return out;
}

SignalTrace read_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::map<std::string, std::string> meta;
  std::map<std::string, SignalInfo> declared;
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string kind;
      ls >> kind;
      if (kind == "meta") {
        std::string kv;
        ls >> kv;
        auto eq = kv.find('=');
        if (eq != std::string::npos) meta[kv.substr(0, eq)] = kv.substr(eq + 1);
      } else if (kind == "signal") {
        SignalInfo s;
        ls >> s.name >> s.width;
        for (std::string label; ls >> label;) s.enumerants.push_back(label);
        declared[s.name] = s;
      }
      continue;
    }
    header = split(line, ',');
    break;
  }
  if (header.empty() || header[0] != "cycle") throw Error(ErrorKind::Parse, "CSV: missing 'cycle' header");

  std::vector<SignalInfo> signals;
  for (std::size_t i = 1; i < header.size(); ++i) {
    auto it = declared.find(header[i]);
    signals.push_back(it != declared.end() ? it->second : SignalInfo{header[i], 64, {}});
  }
  SignalTrace trace(signals);
  trace.meta() = meta;
  std::vector<std::uint64_t> row(signals.size());
  std::uint64_t expected_cycle = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line, ',');
    if (cells.size() != header.size())
      throw Error(ErrorKind::Parse, "CSV: row " + std::to_string(expected_cycle) + " has wrong column count");
    if (parse_u64(cells[0], "CSV cycle") != expected_cycle)
      throw Error(ErrorKind::Parse, "CSV: cycles must increase by 1 from 0");
    for (std::size_t i = 0; i < signals.size(); ++i) {
      const auto &s = signals[i];
      const std::string &cell = cells[i + 1];
      if (s.is_enum()) {
        auto at = std::find(s.enumerants.begin(), s.enumerants.end(), cell);
        row[i] = at != s.enumerants.end() ? static_cast<std::uint64_t>(at - s.enumerants.begin())
                                          : parse_u64(cell, "CSV value");
      } else {
        row[i] = parse_u64(cell, "CSV value");
      }
    }
    trace.append(row);
    ++expected_cycle;
  }
  return trace;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

SignalTrace load_trace(const std::string &path) {
  const std::string text = read_file(path);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".vcd") == 0) return read_vcd(text);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return read_csv(text);
  throw Error(ErrorKind::InvalidArgument, "unrecognized trace extension: '" + path + "'");
}

}  // namespace marchsim
