#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json_io.hpp"
#include "spanmdp/diagnostics.hpp"

namespace spanmdp {

namespace {

std::string number(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "INFINITE" : "-INFINITE";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

detail::Json json_number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "INFINITE" : "-INFINITE";
  return x;
}

std::vector<const AuditReport*> ordered(const std::vector<AuditReport>& reports) {
  std::vector<const AuditReport*> out;
  for (const auto& r : reports) out.push_back(&r);
  std::stable_sort(out.begin(), out.end(), [](const AuditReport* a, const AuditReport* b) {
    return a->instance_id < b->instance_id;
  });
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string audit_csv(const std::vector<AuditReport>& reports) {
  std::string out = "instance_id,check,lhs,rhs,margin,pass\n";
  for (const AuditReport* report : ordered(reports)) {
    for (const auto& r : report->records) {
      out += csv_field(report->instance_id) + "," + csv_field(r.check) + "," + number(r.lhs) + "," +
             number(r.rhs) + "," + number(r.margin) + "," + to_string(r.status) + "\n";
    }
  }
  return out;
}

std::string audit_json(const std::vector<AuditReport>& reports) {
  detail::Json doc = detail::Json::object();
  detail::Json list = detail::Json::array();
  for (const AuditReport* report : ordered(reports)) {
    detail::Json meta = detail::Json::object();
    meta["num_states"] = report->meta.num_states;
    meta["num_actions"] = report->meta.num_actions;
    meta["gamma"] = json_number(report->meta.gamma);
    meta["span_h"] = json_number(report->meta.span_h);
    meta["optimal_gain"] = json_number(report->meta.optimal_gain);
    meta["diameter"] = json_number(report->meta.diameter);
    meta["tau_star"] = json_number(report->meta.tau_star);
    meta["tau_unif"] = json_number(report->meta.tau_unif);
    detail::Json records = detail::Json::array();
    for (const auto& r : report->records) {
      detail::Json rec = detail::Json::object();
      rec["check"] = r.check;
      rec["lhs"] = json_number(r.lhs);
      rec["rhs"] = json_number(r.rhs);
      rec["margin"] = json_number(r.margin);
      if (r.status == CheckStatus::Skipped) {
        rec["pass"] = nullptr;
        rec["skipped"] = true;
      } else {
        rec["pass"] = r.status == CheckStatus::Pass;
      }
      if (!r.enforced) rec["enforced"] = false;
      if (!r.note.empty()) rec["note"] = r.note;
      records.push_back(std::move(rec));
    }
    detail::Json entry = detail::Json::object();
    entry["instance_id"] = report->instance_id;
    entry["all_passed"] = report->all_passed();
    entry["metadata"] = std::move(meta);
    entry["records"] = std::move(records);
    list.push_back(std::move(entry));
  }
  doc["reports"] = std::move(list);
  return doc.dump(2) + "\n";
}

}  // namespace spanmdp
