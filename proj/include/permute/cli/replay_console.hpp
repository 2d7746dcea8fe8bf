#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "permute/core/fingerprint.hpp"
#include "permute/runtime/session.hpp"

namespace permute::cli {

// Step navigation over one recorded schedule. Position k means the first k
// steps have executed; moving backwards re-replays from the start.
class ReplayConsole {
 public:
  ReplayConsole(Session session, Schedule steps, std::uint64_t trace)
      : session_(std::move(session)), steps_(std::move(steps)), trace_(trace) {
    session_.reset();
  }

  std::size_t position() const noexcept { return pos_; }
  std::size_t length() const noexcept { return steps_.size(); }
  const ModelState& state() const noexcept { return session_.state(); }

  void go_to(std::size_t k) {
    if (k > steps_.size()) throw std::out_of_range("step " + std::to_string(k) + " is out of range (0.." + std::to_string(steps_.size()) + ")");
    if (k < pos_)
      session_.replay(std::span<const ScheduleStep>(steps_.data(), k));
    else
      session_.continue_replay(std::span<const ScheduleStep>(steps_.data() + pos_, k - pos_));
    pos_ = k;
  }

  std::string where() const {
    std::string out = "trace: " + std::to_string(trace_) + "; transition: " + std::to_string(pos_) + "; thread: ";
    if (pos_ < steps_.size())
      out += std::to_string(index_of(steps_[pos_].thread));
    else if (!steps_.empty())
      out += std::to_string(index_of(steps_.back().thread));
    else
      out += "-";
    return out;
  }

  std::string threads() const {
    std::string out;
    const auto& s = session_.state();
    for (std::uint32_t i = 0; i < s.thread_count(); ++i) {
      const auto& rec = s.thread(ThreadId{i});
      out += "thread " + std::to_string(i) + ": ";
      if (rec.exited) {
        out += "exited";
      } else if (!rec.pending) {
        out += "faulted";
      } else {
        out += rec.pending->enabled_in(s) ? "runnable" : "blocked";
        out += " next " + std::string(rec.pending->kind()) + " " + subject_of(*rec.pending, s);
      }
      out += " executed " + std::to_string(rec.executed) + "\n";
    }
    return out;
  }

  std::string objects() const {
    std::string out;
    for (const auto& [id, obj] : session_.state().objects())
      out += obj->name() + " (" + std::string(obj->kind()) + ") " + obj->describe() + "\n";
    return out.empty() ? "no objects yet\n" : out;
  }

  std::string vars() const {
    std::string out;
    for (const auto& [name, value] : session_.state().vars()) out += name + " = " + std::to_string(value) + "\n";
    return out.empty() ? "no shared variables\n" : out;
  }

  // Runs one command line. Returns false on quit.
  bool execute(const std::string& line, std::ostream& out) {
    std::istringstream in(line);
    std::string cmd;
    if (!(in >> cmd)) return true;
    auto count = [&](std::size_t fallback) -> std::optional<std::size_t> {
      long long n = static_cast<long long>(fallback);
      std::string extra;
      if (!(in >> n)) {
        if (!in.eof()) return std::nullopt;
        n = static_cast<long long>(fallback);
      }
      if (n < 0 || (in >> extra)) return std::nullopt;
      return static_cast<std::size_t>(n);
    };
    try {
      if (cmd == "quit" || cmd == "exit") return false;
      if (cmd == "goto") {
        auto k = count(0);
        if (!k) return usage(out, "goto K");
        go_to(*k);
        out << where() << "\n";
      } else if (cmd == "forward") {
        auto n = count(1);
        if (!n) return usage(out, "forward [N]");
        go_to(pos_ + *n);
        out << where() << "\n";
      } else if (cmd == "back") {
        auto n = count(1);
        if (!n) return usage(out, "back [N]");
        if (*n > pos_) throw std::out_of_range("cannot go back " + std::to_string(*n) + " from transition " + std::to_string(pos_));
        go_to(pos_ - *n);
        out << where() << "\n";
      } else if (cmd == "where") {
        out << where() << "\n";
        if (pos_ > 0) {
          const auto& s = steps_[pos_ - 1];
          out << "last: thread " << index_of(s.thread) << " " << s.kind << " " << s.subject << "\n";
        }
      } else if (cmd == "threads") {
        out << threads();
      } else if (cmd == "objects") {
        out << objects();
      } else if (cmd == "vars") {
        out << vars();
      } else if (cmd == "fingerprint") {
        out << fingerprint(session_.state()).hex() << "\n";
      } else if (cmd == "help") {
        out << "commands: goto K, forward [N], back [N], where, threads, objects, vars, fingerprint, quit\n";
      } else {
        out << "unknown command '" << cmd << "' (try help)\n";
      }
    } catch (const std::out_of_range& e) {
      out << e.what() << "; position unchanged\n";
    }
    return true;
  }

  void run(std::istream& in, std::ostream& out, bool prompt) {
    out << where() << "\n";
    std::string line;
    while (true) {
      if (prompt) out << "(permute) " << std::flush;
      if (!std::getline(in, line)) break;
      if (!execute(line, out)) break;
    }
  }

 private:
  static bool usage(std::ostream& out, const char* form) {
    out << "usage: " << form << "\n";
    return true;
  }

  Session session_;
  Schedule steps_;
  std::uint64_t trace_;
  std::size_t pos_ = 0;
};

}  // namespace permute::cli
