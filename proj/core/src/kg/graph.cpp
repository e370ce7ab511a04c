#include "modelforge/kg/graph.hpp"

namespace modelforge::kg {

namespace {
// Empty IRIs sort before every real IRI, so they work as range lower bounds.
Iri min_iri() {
  Iri i;
  return i;
}
Term min_term() { return Term{min_iri()}; }
}  // namespace

bool Graph::insert(const Triple& t) {
  if (!spo_.insert(t).second) return false;
  pos_.emplace(t.predicate, t.object, t.subject);
  osp_.emplace(t.object, t.subject, t.predicate);
  return true;
}

bool Graph::erase(const Triple& t) {
  if (spo_.erase(t) == 0) return false;
  pos_.erase({t.predicate, t.object, t.subject});
  osp_.erase({t.object, t.subject, t.predicate});
  return true;
}

void Graph::clear() {
  spo_.clear();
  pos_.clear();
  osp_.clear();
}

void Graph::match(const std::optional<Iri>& s, const std::optional<Iri>& p, const std::optional<Term>& o,
                  const Visitor& visit) const {
  if (s) {
    Triple lo{*s, p ? *p : min_iri(), p && o ? *o : min_term()};
    for (auto it = spo_.lower_bound(lo); it != spo_.end() && it->subject == *s; ++it) {
      if (p && it->predicate != *p) break;
      if (o && it->object != *o) continue;
      visit(*it);
    }
    return;
  }
  if (p) {
    auto lo = std::make_tuple(*p, o ? *o : min_term(), min_iri());
    for (auto it = pos_.lower_bound(lo); it != pos_.end() && std::get<0>(*it) == *p; ++it) {
      if (o && std::get<1>(*it) != *o) break;
      visit(Triple{std::get<2>(*it), std::get<0>(*it), std::get<1>(*it)});
    }
    return;
  }
  if (o) {
    auto lo = std::make_tuple(*o, min_iri(), min_iri());
    for (auto it = osp_.lower_bound(lo); it != osp_.end() && std::get<0>(*it) == *o; ++it)
      visit(Triple{std::get<1>(*it), std::get<2>(*it), std::get<0>(*it)});
    return;
  }
  for (const auto& t : spo_) visit(t);
}

std::vector<Triple> Graph::find(const std::optional<Iri>& s, const std::optional<Iri>& p,
                                const std::optional<Term>& o) const {
  std::vector<Triple> out;
  match(s, p, o, [&](const Triple& t) { out.push_back(t); });
  return out;
}

std::optional<Term> Graph::object(const Iri& s, const Iri& p) const {
  Triple lo{s, p, min_term()};
  auto it = spo_.lower_bound(lo);
  if (it != spo_.end() && it->subject == s && it->predicate == p) return it->object;
  return std::nullopt;
}

std::vector<Term> Graph::objects(const Iri& s, const Iri& p) const {
  std::vector<Term> out;
  match(s, p, std::nullopt, [&](const Triple& t) { out.push_back(t.object); });
  return out;
}

std::vector<Iri> Graph::subjects(const Iri& p, const Term& o) const {
  std::vector<Iri> out;
  match(std::nullopt, p, o, [&](const Triple& t) { out.push_back(t.subject); });
  return out;
}

}  // namespace modelforge::kg
