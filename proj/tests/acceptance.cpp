// Acceptance runner: one line per criterion, exit status 0 only if all pass.
//
// Criteria 1-10 are the shared verify-all set. Criterion 11 re-runs the whole set
// in process, requires byte-identical JSON and CSV output, and bounds the wall time.

#include "krein/acceptance.hpp"
#include "krein/report.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

namespace {

struct Snapshot {
  std::string json;
  std::vector<std::string> csv;
};

Snapshot render(const krein::Report& r) {
  Snapshot s{krein::to_json_text(r), {}};
  for (const auto& t : r.tables) s.csv.push_back(krein::to_csv(t));
  return s;
}

void line(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("criterion %d: %s  %s%s\n", id, pass ? "PASS" : "FAIL", title.c_str(),
              detail.empty() ? "" : ("  [" + detail + "]").c_str());
  std::fflush(stdout);
}

std::string failures(const krein::acceptance::Outcome& o) {
  if (!o.error.empty()) return "error: " + o.error;
  std::string out;
  for (const auto& c : o.report.checks)
    if (!c.pass) out += (out.empty() ? "" : "; ") + c.name + "=" + krein::format_double(c.residual);
  return out;
}

}  // namespace

int main() {
  using namespace krein::acceptance;
  const auto start = std::chrono::steady_clock::now();
  std::vector<Outcome> first;
  bool all = true;
  for (const auto& c : criteria()) {
    first.push_back(run(c));
    const Outcome& o = first.back();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1f s", o.seconds);
    const std::string why = failures(o);
    line(o.id, o.pass(), o.title, why.empty() ? timing : why);
    all = all && o.pass();
  }
  const double first_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<Outcome> second;
  for (const auto& c : criteria()) second.push_back(run(c));
  const Snapshot a = render(combine(first)), b = render(combine(second));
  const bool identical = a.json == b.json && a.csv == b.csv;
  const bool fast = first_seconds < 300.0;
  char detail[96];
  std::snprintf(detail, sizeof detail, "suite %.1f s (limit 300 s), rerun %s", first_seconds,
                identical ? "byte-identical" : "DIFFERS");
  line(11, identical && fast, "full suite is reproducible and finishes within five minutes", detail);
  all = all && identical && fast;
  return all ? 0 : 1;
}
