#include "steinevt/report.hpp"

#include <cstdio>
#include <sstream>

namespace steinevt {

void BoundReport::add(std::string stage, std::string label, double value, std::string ref) {
  terms.push_back({std::move(stage), std::move(label), value, std::move(ref)});
  total = sum_terms();
}

double BoundReport::sum_terms() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.value;
  return s;
}

nlohmann::ordered_json to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["name"] = r.name;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : r.terms)
    j["terms"].push_back({{"stage", t.stage}, {"label", t.label}, {"term", t.value}, {"ref", t.ref}});
  j["total"] = r.total;
  if (r.oracle) j["oracle"] = *r.oracle;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.meta) meta[k] = v;
  j["meta"] = meta;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

static std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const BoundReport& r) {
  std::ostringstream os;
  os << "name,stage,label,term,ref\n";
  for (const auto& t : r.terms)
    os << r.name << ',' << t.stage << ',' << t.label << ',' << fmt(t.value) << ",\"" << t.ref << "\"\n";
  os << r.name << ",total,total," << fmt(r.total) << ",\"\"\n";
  if (r.oracle) os << r.name << ",oracle,oracle," << fmt(*r.oracle) << ",\"\"\n";
  return os.str();
}

}  // namespace steinevt
