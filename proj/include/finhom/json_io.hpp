#pragma once

#include <string>

#include <json.hpp>

#include "finhom/structures.hpp"

// JSON interchange format for finite structures:
//   {"sig": {"relations": [{"name":..,"arity":..,"kind":..},...],
//            "preds": [...], "fns": [...]},
//    "size": N,
//    "rel": {"<name>": [[i,j,...],...]},
//    "pred": {"<name>": [i,...]},
//    "fn": {"<name>": [v0,...,v_{N-1}]}}
// Tuples are arrays of 0-based indices.

namespace finhom {

using json = nlohmann::json;

inline json to_json(const Signature& sig) {
  json relations = json::array();
  for (auto& r : sig.relations)
    relations.push_back({{"name", r.name}, {"arity", r.arity}, {"kind", kind_name(r.kind)}});
  return json{{"relations", relations}, {"preds", sig.preds}, {"fns", sig.fns}};
}

inline Signature signature_from_json(const json& j) {
  Signature sig;
  for (auto& r : j.at("relations"))
    sig.relations.push_back(
        {r.at("name").get<std::string>(), r.at("arity").get<int>(),
         kind_from_name(r.at("kind").get<std::string>())});
  if (j.contains("preds")) sig.preds = j.at("preds").get<std::vector<std::string>>();
  if (j.contains("fns")) sig.fns = j.at("fns").get<std::vector<std::string>>();
  sig.validate();
  return sig;
}

inline json to_json(const FinStruct& s) {
  json rel = json::object();
  for (size_t ri = 0; ri < s.rel.size(); ++ri) {
    json tuples = json::array();
    for (size_t k = 0; k < s.rel[ri].size(); ++k) tuples.push_back(s.rel[ri].decode(k));
    rel[s.sig.relations[ri].name] = tuples;
  }
  json pred = json::object();
  for (size_t pi = 0; pi < s.pred.size(); ++pi) {
    json members = json::array();
    for (int x = 0; x < s.size; ++x)
      if (s.pred[pi][x]) members.push_back(x);
    pred[s.sig.preds[pi]] = members;
  }
  json fn = json::object();
  for (size_t fi = 0; fi < s.fn.size(); ++fi) fn[s.sig.fns[fi]] = s.fn[fi];
  return json{{"sig", to_json(s.sig)}, {"size", s.size}, {"rel", rel},
              {"pred", pred},          {"fn", fn}};
}

inline FinStruct struct_from_json(const json& j) {
  Signature sig = signature_from_json(j.at("sig"));
  int n = j.at("size").get<int>();
  FinStruct s = FinStruct::empty(sig, n);
  if (j.contains("rel"))
    for (auto& [name, tuples] : j.at("rel").items()) {
      int ri = sig.rel_index(name);
      for (auto& tup : tuples) {
        Tuple t = tup.get<Tuple>();
        if (int(t.size()) != s.rel[ri].arity) throw error(name + ": tuple arity mismatch");
        for (int x : t) s.check_range(x);
        s.rel[ri].add(t.data());
      }
      s.rel[ri].finish();
    }
  if (j.contains("pred"))
    for (auto& [name, members] : j.at("pred").items()) {
      size_t pi = 0;
      while (pi < sig.preds.size() && sig.preds[pi] != name) ++pi;
      if (pi == sig.preds.size()) throw error("unknown predicate: " + name);
      for (auto& m : members) {
        int x = m.get<int>();
        s.check_range(x);
        s.pred[pi][x] = 1;
      }
    }
  if (j.contains("fn"))
    for (auto& [name, values] : j.at("fn").items()) {
      size_t fi = 0;
      while (fi < sig.fns.size() && sig.fns[fi] != name) ++fi;
      if (fi == sig.fns.size()) throw error("unknown function: " + name);
      auto v = values.get<std::vector<int>>();
      if (int(v.size()) != n) throw error(name + ": function table must be total");
      for (int x : v) s.check_range(x);
      s.fn[fi] = v;
    }
  return s;
}

}  // namespace finhom
