#include "pvcsp/json_io.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <utility>

namespace pvcsp {

namespace {

std::string jp(const std::string& base, const std::string& key) {
  return base + "/" + key;
}
std::string jp(const std::string& base, std::size_t i) {
  return base + "/" + std::to_string(i);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError("expected an object", where);
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(std::string("missing member '") + key + "'", where);
  return *it;
}

const Json* opt_member(const Json& j, const char* key,
                       const std::string& where) {
  if (!j.is_object()) throw ParseError("expected an object", where);
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) throw ParseError("expected an object", where);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ParseError("unknown member '" + it.key() + "'", where);
  }
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError("expected a string", where);
  return j.get<std::string>();
}

int as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError("expected an integer", where);
  return j.get<int>();
}

bool as_bool(const Json& j, const std::string& where) {
  if (!j.is_boolean()) throw ParseError("expected a boolean", where);
  return j.get<bool>();
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError("expected an array", where);
  return j;
}

int key_as_index(const std::string& key, const std::string& where) {
  if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected a numeric key, got '" + key + "'", where);
  return std::stoi(key);
}

/// Runs a validation callback, converting any violation into a ParseError
/// anchored at `where`.
template <typename F>
void checked(const std::string& where, F&& f) {
  try {
    f();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(e.what(), where);
  }
}

int sort_by_name(const Signature& sig, const std::string& name,
                 const std::string& where) {
  const int t = sig.sort_index(name);
  if (t < 0) throw ParseError("unknown sort '" + name + "'", where);
  return t;
}

int element_by_id(const SortedSet& dom, const std::string& id,
                  const std::string& where) {
  const int e = dom.index_of(id);
  if (e < 0) throw ParseError("unknown element '" + id + "'", where);
  return e;
}

int symbol_by_id(const Signature& sig, const std::string& id,
                 const std::string& where) {
  const int s = sig.symbol_index(id);
  if (s < 0) throw ParseError("unknown symbol '" + id + "'", where);
  return s;
}

std::string subset_name(std::uint32_t subset) {
  std::string s = "{";
  bool first = true;
  for (int n = 0; subset >> n; ++n)
    if ((subset >> n) & 1) {
      if (!first) s += ",";
      s += std::to_string(n);
      first = false;
    }
  return s + "}";
}

Json sparse_rat_object(const std::vector<std::string>& labels,
                       const std::vector<Rat>& values) {
  Json obj = Json::object();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != 0) obj[labels[i]] = rat_to_string(values[i]);
  return obj;
}

}  // namespace

Json rat_to_json(const Rat& r) { return Json(rat_to_string(r)); }

Rat rat_from_json(const Json& j, const std::string& where) {
  const std::string s = as_string(j, where);
  Rat r;
  checked(where, [&] { r = rat_from_string(s); });
  return r;
}

Json ext_to_json(const Ext& e) { return Json(ext_to_string(e)); }

Ext ext_from_json(const Json& j, const std::string& where) {
  const std::string s = as_string(j, where);
  Ext e;
  checked(where, [&] { e = ext_from_string(s); });
  return e;
}

Json structure_to_json(const ValuedStructure& a) {
  Json j;
  j["sorts"] = a.sig().sorts;

  Json symbols = Json::array();
  for (const auto& sym : a.sig().symbols) {
    Json coords = Json::array();
    for (const auto& c : sym.arity) {
      Json coord;
      coord["name"] = c.name;
      coord["sort"] = a.sig().sorts[c.sort];
      coords.push_back(std::move(coord));
    }
    Json s;
    s["id"] = sym.id;
    s["arity"] = std::move(coords);
    symbols.push_back(std::move(s));
  }
  j["symbols"] = std::move(symbols);

  Json domain = Json::array();
  for (int e = 0; e < a.dom().size(); ++e) {
    Json elem;
    elem["id"] = a.dom().id(e);
    elem["sort"] = a.sig().sorts[a.dom().sort_of(e)];
    domain.push_back(std::move(elem));
  }
  j["domain"] = std::move(domain);

  Json tables = Json::object();
  for (std::size_t sym = 0; sym < a.sig().symbols.size(); ++sym) {
    const Interp& in = a.interp(static_cast<int>(sym));
    Json rows = Json::array();
    for (std::int64_t r = 0; r < in.space.total(); ++r) {
      Tuple t = in.space.unrank(r);
      Json ids = Json::array();
      for (int e : t) ids.push_back(a.dom().id(e));
      Json entry = Json::array();
      entry.push_back(std::move(ids));
      entry.push_back(ext_to_json(in.table[r]));
      rows.push_back(std::move(entry));
    }
    tables[a.sig().symbols[sym].id] = std::move(rows);
  }
  j["tables"] = std::move(tables);
  return j;
}

ValuedStructure structure_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"sorts", "symbols", "domain", "tables"}, where);
  auto sig = std::make_shared<Signature>();

  const Json& sorts = as_array(member(j, "sorts", where), jp(where, "sorts"));
  for (std::size_t i = 0; i < sorts.size(); ++i)
    sig->sorts.push_back(as_string(sorts[i], jp(jp(where, "sorts"), i)));

  const Json& symbols =
      as_array(member(j, "symbols", where), jp(where, "symbols"));
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const std::string sw = jp(jp(where, "symbols"), i);
    check_keys(symbols[i], {"id", "arity"}, sw);
    Symbol sym;
    sym.id = as_string(member(symbols[i], "id", sw), jp(sw, "id"));
    const Json& arity =
        as_array(member(symbols[i], "arity", sw), jp(sw, "arity"));
    for (std::size_t z = 0; z < arity.size(); ++z) {
      const std::string cw = jp(jp(sw, "arity"), z);
      check_keys(arity[z], {"name", "sort"}, cw);
      Coord coord;
      coord.name = as_string(member(arity[z], "name", cw), jp(cw, "name"));
      coord.sort = sort_by_name(
          *sig, as_string(member(arity[z], "sort", cw), jp(cw, "sort")),
          jp(cw, "sort"));
      sym.arity.push_back(std::move(coord));
    }
    sig->symbols.push_back(std::move(sym));
  }
  checked(where, [&] { sig->validate(); });

  const Json& domain = as_array(member(j, "domain", where), jp(where, "domain"));
  std::vector<std::pair<std::string, int>> elems;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const std::string ew = jp(jp(where, "domain"), i);
    check_keys(domain[i], {"id", "sort"}, ew);
    elems.emplace_back(
        as_string(member(domain[i], "id", ew), jp(ew, "id")),
        sort_by_name(*sig, as_string(member(domain[i], "sort", ew), jp(ew, "sort")),
                     jp(ew, "sort")));
  }
  SortedSet dom;
  checked(jp(where, "domain"), [&] {
    dom = SortedSet(std::move(elems), static_cast<int>(sig->sorts.size()));
  });

  const Json& tables = member(j, "tables", where);
  if (!tables.is_object())
    throw ParseError("expected an object", jp(where, "tables"));
  for (auto it = tables.begin(); it != tables.end(); ++it)
    symbol_by_id(*sig, it.key(), jp(where, "tables"));

  std::vector<std::vector<Ext>> interp_tables;
  for (std::size_t sym = 0; sym < sig->symbols.size(); ++sym) {
    const std::string& id = sig->symbols[sym].id;
    const std::string tw = jp(jp(where, "tables"), id);
    auto it = tables.find(id);
    if (it == tables.end())
      throw ParseError("missing table for symbol '" + id + "'",
                       jp(where, "tables"));
    const Json& rows = as_array(*it, tw);
    TupleSpace space(dom, arity_sorts(sig->symbols[sym]));
    std::vector<Ext> table(static_cast<std::size_t>(space.total()));
    std::vector<bool> seen(table.size(), false);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string rw = jp(tw, i);
      const Json& entry = as_array(rows[i], rw);
      if (entry.size() != 2)
        throw ParseError("expected a [tuple, value] pair", rw);
      const Json& ids = as_array(entry[0], jp(rw, "0"));
      if (ids.size() != sig->symbols[sym].arity.size())
        throw ParseError("tuple length does not match the symbol arity",
                         jp(rw, "0"));
      Tuple t;
      for (std::size_t z = 0; z < ids.size(); ++z)
        t.push_back(element_by_id(dom, as_string(ids[z], jp(jp(rw, "0"), z)),
                                  jp(jp(rw, "0"), z)));
      if (!space.sort_respecting(t))
        throw ParseError("tuple entry of the wrong sort", jp(rw, "0"));
      const std::int64_t r = space.rank(t);
      if (seen[static_cast<std::size_t>(r)])
        throw ParseError("duplicate tuple", jp(rw, "0"));
      seen[static_cast<std::size_t>(r)] = true;
      table[static_cast<std::size_t>(r)] = ext_from_json(entry[1], jp(rw, "1"));
    }
    for (std::size_t r = 0; r < seen.size(); ++r)
      if (!seen[r])
        throw ParseError("table for symbol '" + id + "' is missing tuples", tw);
    interp_tables.push_back(std::move(table));
  }

  ValuedStructure out;
  checked(where, [&] {
    out = ValuedStructure(std::move(sig), std::move(dom),
                          std::move(interp_tables));
  });
  return out;
}

Json template_to_json(const ValuedTemplate& t) {
  Json j;
  if (t.kind == ValuedTemplate::Kind::Standard) {
    j["kind"] = "standard";
    j["c"] = rat_to_json(t.c);
    j["s"] = rat_to_json(t.s);
  } else {
    j["kind"] = "constant-factor";
    j["kappa"] = rat_to_json(t.kappa);
  }
  j["A"] = structure_to_json(t.A);
  j["B"] = structure_to_json(t.B);
  return j;
}

ValuedTemplate template_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"kind", "c", "s", "kappa", "A", "B"}, where);
  ValuedTemplate t;
  const std::string kind =
      as_string(member(j, "kind", where), jp(where, "kind"));
  if (kind == "standard") {
    t.kind = ValuedTemplate::Kind::Standard;
    t.c = rat_from_json(member(j, "c", where), jp(where, "c"));
    t.s = rat_from_json(member(j, "s", where), jp(where, "s"));
    if (opt_member(j, "kappa", where))
      throw ParseError("standard templates take no kappa", jp(where, "kappa"));
  } else if (kind == "constant-factor") {
    t.kind = ValuedTemplate::Kind::ConstantFactor;
    t.kappa = rat_from_json(member(j, "kappa", where), jp(where, "kappa"));
    if (opt_member(j, "c", where) || opt_member(j, "s", where))
      throw ParseError("constant-factor templates take no thresholds", where);
  } else {
    throw ParseError("kind must be 'standard' or 'constant-factor'",
                     jp(where, "kind"));
  }
  t.A = structure_from_json(member(j, "A", where), jp(where, "A"));
  t.B = structure_from_json(member(j, "B", where), jp(where, "B"));
  checked(where, [&] { t.validate(); });
  return t;
}

Json formula_to_json(const PayoffFormula& phi) {
  Json j;
  Json vars = Json::array();
  for (int v = 0; v < phi.vars.size(); ++v) {
    Json var;
    var["id"] = phi.vars.id(v);
    var["sort"] = phi.sig->sorts[phi.vars.sort_of(v)];
    vars.push_back(std::move(var));
  }
  j["vars"] = std::move(vars);
  Json constraints = Json::array();
  for (const Atom& atom : phi.atoms) {
    Json a;
    a["w"] = rat_to_json(atom.w);
    a["sym"] = phi.sig->symbols[atom.symbol].id;
    Json args = Json::array();
    for (int v : atom.args) args.push_back(phi.vars.id(v));
    a["args"] = std::move(args);
    constraints.push_back(std::move(a));
  }
  j["constraints"] = std::move(constraints);
  return j;
}

PayoffFormula formula_from_json(const Json& j, const ValuedTemplate& tmpl,
                                const std::string& where) {
  check_keys(j, {"vars", "constraints"}, where);
  PayoffFormula phi;
  phi.sig = tmpl.A.sig_ptr();

  const Json& vars = as_array(member(j, "vars", where), jp(where, "vars"));
  std::vector<std::pair<std::string, int>> elems;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string vw = jp(jp(where, "vars"), i);
    check_keys(vars[i], {"id", "sort"}, vw);
    elems.emplace_back(
        as_string(member(vars[i], "id", vw), jp(vw, "id")),
        sort_by_name(*phi.sig,
                     as_string(member(vars[i], "sort", vw), jp(vw, "sort")),
                     jp(vw, "sort")));
  }
  checked(jp(where, "vars"), [&] {
    phi.vars = SortedSet(std::move(elems),
                         static_cast<int>(phi.sig->sorts.size()));
  });

  const Json& constraints =
      as_array(member(j, "constraints", where), jp(where, "constraints"));
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const std::string aw = jp(jp(where, "constraints"), i);
    check_keys(constraints[i], {"w", "sym", "args"}, aw);
    Atom atom;
    atom.w = rat_from_json(member(constraints[i], "w", aw), jp(aw, "w"));
    atom.symbol = symbol_by_id(
        *phi.sig, as_string(member(constraints[i], "sym", aw), jp(aw, "sym")),
        jp(aw, "sym"));
    const Json& args =
        as_array(member(constraints[i], "args", aw), jp(aw, "args"));
    for (std::size_t z = 0; z < args.size(); ++z) {
      const std::string id = as_string(args[z], jp(jp(aw, "args"), z));
      const int v = phi.vars.index_of(id);
      if (v < 0)
        throw ParseError("unknown variable '" + id + "'", jp(jp(aw, "args"), z));
      atom.args.push_back(v);
    }
    phi.atoms.push_back(std::move(atom));
  }
  checked(where, [&] { phi.validate(); });
  return phi;
}

Json function_to_json(const NaryFunction& f, const SortedSet& dom,
                      const SortedSet& cod) {
  Json j;
  j["arity"] = f.arity;
  Json tables = Json::array();
  for (int t = 0; t < dom.sort_count(); ++t) {
    Json table = Json::array();
    for (int v : f.tables[t]) table.push_back(cod.id(v));
    tables.push_back(std::move(table));
  }
  j["tables"] = std::move(tables);
  return j;
}

NaryFunction function_from_json(const Json& j, const SortedSet& dom,
                                const SortedSet& cod,
                                const std::string& where) {
  check_keys(j, {"arity", "tables"}, where);
  NaryFunction f;
  f.arity = as_int(member(j, "arity", where), jp(where, "arity"));
  if (f.arity < 0) throw ParseError("arity must be nonnegative", jp(where, "arity"));
  const Json& tables = as_array(member(j, "tables", where), jp(where, "tables"));
  if (static_cast<int>(tables.size()) != dom.sort_count())
    throw ParseError("expected one table per sort", jp(where, "tables"));
  FnSpace fs(dom, cod, f.arity);
  for (int t = 0; t < dom.sort_count(); ++t) {
    const std::string tw = jp(jp(where, "tables"), static_cast<std::size_t>(t));
    const Json& table = as_array(tables[t], tw);
    if (static_cast<std::int64_t>(table.size()) != fs.inputs(t))
      throw ParseError("table size does not match the input space", tw);
    std::vector<int> values;
    for (std::size_t i = 0; i < table.size(); ++i) {
      const int e =
          element_by_id(cod, as_string(table[i], jp(tw, i)), jp(tw, i));
      if (cod.sort_of(e) != t)
        throw ParseError("value of the wrong sort", jp(tw, i));
      values.push_back(e);
    }
    f.tables.push_back(std::move(values));
  }
  checked(where, [&] { fs.validate(f); });
  return f;
}

Json distribution_to_json(const Distribution& d) {
  Json obj = Json::object();
  for (const auto& [key, p] : d.entries)
    obj[std::to_string(key)] = rat_to_string(p);
  return obj;
}

namespace {

Distribution distribution_from_json(const Json& j, int carrier,
                                    const std::string& where) {
  if (!j.is_object()) throw ParseError("expected an object", where);
  Distribution d;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const int key = key_as_index(it.key(), where);
    d.entries.emplace_back(key,
                           rat_from_json(it.value(), jp(where, it.key())));
  }
  std::sort(d.entries.begin(), d.entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  checked(where, [&] { d.validate(carrier); });
  return d;
}

}  // namespace

Json weighting_to_json(const Weighting& w, const ValuedTemplate& tmpl) {
  Json j;
  j["arity"] = w.arity;
  j["in"] = distribution_to_json(w.in);
  Json out = Json::array();
  for (std::size_t i = 0; i < w.support.size(); ++i) {
    Json entry;
    entry["fn"] = function_to_json(w.support[i], tmpl.A.dom(), tmpl.B.dom());
    entry["w"] = rat_to_string(w.out.prob(static_cast<int>(i)));
    out.push_back(std::move(entry));
  }
  j["out"] = std::move(out);
  return j;
}

Weighting weighting_from_json(const Json& j, const ValuedTemplate& tmpl,
                              const std::string& where, const Limits& lim) {
  check_keys(j, {"arity", "in", "out"}, where);
  Weighting w;
  w.arity = as_int(member(j, "arity", where), jp(where, "arity"));
  if (w.arity < 1) throw ParseError("arity must be positive", jp(where, "arity"));
  w.in = distribution_from_json(member(j, "in", where), w.arity, jp(where, "in"));

  const Json& out = as_array(member(j, "out", where), jp(where, "out"));
  std::vector<std::pair<NaryFunction, Rat>> entries;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::string ow = jp(jp(where, "out"), i);
    check_keys(out[i], {"fn", "w"}, ow);
    NaryFunction f = function_from_json(member(out[i], "fn", ow),
                                        tmpl.A.dom(), tmpl.B.dom(), jp(ow, "fn"));
    if (f.arity != w.arity)
      throw ParseError("support function arity mismatch", jp(ow, "fn"));
    Rat p = rat_from_json(member(out[i], "w", ow), jp(ow, "w"));
    if (p < 0) throw ParseError("probabilities must be nonnegative", jp(ow, "w"));
    entries.emplace_back(std::move(f), std::move(p));
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i + 1 < entries.size(); ++i)
    if (entries[i].first == entries[i + 1].first)
      throw ParseError("duplicate support function", jp(where, "out"));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    w.support.push_back(entries[i].first);
    if (entries[i].second > 0)
      w.out.entries.emplace_back(static_cast<int>(i), entries[i].second);
  }
  checked(jp(where, "out"), [&] {
    w.out.validate(static_cast<int>(w.support.size()));
  });
  checked(where, [&] { w.validate(tmpl.A, tmpl.B, lim); });
  return w;
}

Json weightings_to_json(const std::vector<Weighting>& ws,
                        const ValuedTemplate& tmpl) {
  Json arr = Json::array();
  for (const Weighting& w : ws) arr.push_back(weighting_to_json(w, tmpl));
  return arr;
}

std::vector<Weighting> weightings_from_json(const Json& j,
                                            const ValuedTemplate& tmpl,
                                            const std::string& where,
                                            const Limits& lim) {
  const Json& arr = as_array(j, where);
  std::vector<Weighting> ws;
  for (std::size_t i = 0; i < arr.size(); ++i)
    ws.push_back(weighting_from_json(arr[i], tmpl, jp(where, i), lim));
  return ws;
}

Json lp_to_json(const LPSystem& sys) {
  Json j;
  j["cols"] = sys.col_labels;
  Json rows = Json::array();
  for (int r = 0; r < sys.n_rows(); ++r) {
    Json row;
    row["label"] = sys.row_labels[r];
    row["rhs"] = rat_to_string(sys.rhs[r]);
    row["coef"] = sparse_rat_object(sys.col_labels, sys.coef[r]);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

LPSystem lp_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"cols", "rows"}, where);
  LPSystem sys;
  const Json& cols = as_array(member(j, "cols", where), jp(where, "cols"));
  for (std::size_t i = 0; i < cols.size(); ++i)
    checked(jp(jp(where, "cols"), i), [&] {
      sys.add_col(as_string(cols[i], jp(jp(where, "cols"), i)));
    });
  const Json& rows = as_array(member(j, "rows", where), jp(where, "rows"));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string rw = jp(jp(where, "rows"), i);
    check_keys(rows[i], {"label", "rhs", "coef"}, rw);
    int r = 0;
    checked(rw, [&] {
      r = sys.add_row(as_string(member(rows[i], "label", rw), jp(rw, "label")),
                      rat_from_json(member(rows[i], "rhs", rw), jp(rw, "rhs")));
    });
    const Json& coef = member(rows[i], "coef", rw);
    if (!coef.is_object()) throw ParseError("expected an object", jp(rw, "coef"));
    for (auto it = coef.begin(); it != coef.end(); ++it) {
      const int c = sys.col_index(it.key());
      if (c < 0)
        throw ParseError("unknown column '" + it.key() + "'", jp(rw, "coef"));
      sys.add_coef(r, c, rat_from_json(it.value(), jp(jp(rw, "coef"), it.key())));
    }
  }
  checked(where, [&] { sys.validate(); });
  return sys;
}

Json lp_result_to_json(const LPResult& res, const LPSystem& sys) {
  Json j;
  j["feasible"] = res.feasible;
  if (res.feasible)
    j["y"] = sparse_rat_object(sys.col_labels, res.y);
  else
    j["x"] = sparse_rat_object(sys.row_labels, res.x);
  return j;
}

std::vector<CanonicalFamily> families_from_json(const Json& j,
                                                const std::string& where) {
  const Json* arr = &j;
  std::string base = where;
  if (j.is_object()) {
    check_keys(j, {"families"}, where);
    arr = &member(j, "families", where);
    base = jp(where, "families");
  }
  const Json& families = as_array(*arr, base);
  std::vector<CanonicalFamily> out;
  for (std::size_t i = 0; i < families.size(); ++i) {
    const std::string fw = jp(base, i);
    check_keys(families[i], {"arity", "alpha", "beta"}, fw);
    CanonicalFamily fam;
    fam.arity = as_int(member(families[i], "arity", fw), jp(fw, "arity"));
    const Json& alpha =
        as_array(member(families[i], "alpha", fw), jp(fw, "alpha"));
    for (std::size_t z = 0; z < alpha.size(); ++z)
      fam.alpha.push_back(rat_from_json(alpha[z], jp(jp(fw, "alpha"), z)));
    const Json& beta = as_array(member(families[i], "beta", fw), jp(fw, "beta"));
    for (std::size_t z = 0; z < beta.size(); ++z)
      fam.beta.push_back(rat_from_json(beta[z], jp(jp(fw, "beta"), z)));
    out.push_back(std::move(fam));
  }
  return out;
}

Json canonical_result_to_json(const CanonicalResult& res,
                              const ValuedTemplate& tmpl, bool dump_lp) {
  Json j;
  j["outcome"] = res.is_formulas ? "formulas" : "witness";
  if (res.is_formulas) {
    Json formulas = Json::array();
    for (const SynthFormula& f : res.formulas) {
      Json entry;
      entry["formula"] = formula_to_json(f.formula);
      entry["delta_in"] = rat_to_string(f.delta_in);
      entry["delta_out"] = rat_to_string(f.delta_out);
      entry["delta"] = rat_to_string(f.delta);
      formulas.push_back(std::move(entry));
    }
    j["formulas"] = std::move(formulas);
    j["gamma"] = rat_to_string(res.gamma);
  } else {
    j["kappa"] = rat_to_string(res.kappa);
    j["omegas"] = weightings_to_json(res.omegas, tmpl);
  }
  if (dump_lp) {
    j["lp"] = lp_to_json(res.lp);
    j["lp_result"] = lp_result_to_json(res.lp_result, res.lp);
  }
  return j;
}

Json check_result_to_json(const CheckTemplateResult& res,
                          const ValuedTemplate& tmpl, bool dump_lp) {
  Json j;
  j["valid"] = res.valid;
  if (res.valid) {
    j["kappa"] = rat_to_string(res.kappa);
    j["witness"] = weighting_to_json(*res.witness, tmpl);
  } else {
    j["counter"] = formula_to_json(*res.counter);
  }
  if (dump_lp) {
    j["lp"] = lp_to_json(res.lp);
    j["lp_result"] = lp_result_to_json(res.lp_result, res.lp);
  }
  return j;
}

Json mc_to_json(const MCInstance& inst) {
  Json j;
  j["k"] = inst.k;
  Json u = Json::array();
  for (std::size_t i = 0; i < inst.u_names.size(); ++i) {
    Json var;
    var["name"] = inst.u_names[i];
    var["dom"] = inst.u_dom[i];
    u.push_back(std::move(var));
  }
  j["u"] = std::move(u);
  Json v = Json::array();
  for (std::size_t i = 0; i < inst.v_names.size(); ++i) {
    Json var;
    var["name"] = inst.v_names[i];
    var["dom"] = inst.v_dom[i];
    v.push_back(std::move(var));
  }
  j["v"] = std::move(v);
  Json conditions = Json::array();
  for (const MinorCondition& c : inst.conditions) {
    Json cond;
    cond["u"] = c.u;
    cond["v"] = c.v;
    cond["pi"] = c.pi;
    conditions.push_back(std::move(cond));
  }
  j["conditions"] = std::move(conditions);
  return j;
}

MCInstance mc_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"k", "u", "v", "conditions"}, where);
  MCInstance inst;
  inst.k = as_int(member(j, "k", where), jp(where, "k"));
  const auto parse_side = [&](const char* key,
                              std::vector<std::string>& names,
                              std::vector<std::vector<std::string>>& doms) {
    const Json& side = as_array(member(j, key, where), jp(where, key));
    for (std::size_t i = 0; i < side.size(); ++i) {
      const std::string vw = jp(jp(where, key), i);
      check_keys(side[i], {"name", "dom"}, vw);
      names.push_back(as_string(member(side[i], "name", vw), jp(vw, "name")));
      const Json& dom = as_array(member(side[i], "dom", vw), jp(vw, "dom"));
      std::vector<std::string> labels;
      for (std::size_t z = 0; z < dom.size(); ++z)
        labels.push_back(as_string(dom[z], jp(jp(vw, "dom"), z)));
      doms.push_back(std::move(labels));
    }
  };
  parse_side("u", inst.u_names, inst.u_dom);
  parse_side("v", inst.v_names, inst.v_dom);
  const Json& conditions =
      as_array(member(j, "conditions", where), jp(where, "conditions"));
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    const std::string cw = jp(jp(where, "conditions"), i);
    check_keys(conditions[i], {"u", "v", "pi"}, cw);
    MinorCondition c;
    c.u = as_int(member(conditions[i], "u", cw), jp(cw, "u"));
    c.v = as_int(member(conditions[i], "v", cw), jp(cw, "v"));
    const Json& pi = as_array(member(conditions[i], "pi", cw), jp(cw, "pi"));
    for (std::size_t z = 0; z < pi.size(); ++z)
      c.pi.push_back(as_int(pi[z], jp(jp(cw, "pi"), z)));
    inst.conditions.push_back(std::move(c));
  }
  checked(where, [&] { inst.validate(); });
  return inst;
}

Json vmc_to_json(const VMCInstance& inst, const ValuedTemplate& tmpl) {
  Json j;
  j["mc"] = mc_to_json(inst.mc);
  Json alpha = Json::array();
  for (const auto& row : inst.alpha) {
    Json entries = Json::array();
    for (const Rat& v : row) entries.push_back(rat_to_string(v));
    alpha.push_back(std::move(entries));
  }
  j["alpha"] = std::move(alpha);
  Json beta = Json::array();
  for (const BetaTable& table : inst.beta) {
    Json t;
    t["default"] = rat_to_string(table.default_value);
    Json entries = Json::array();
    for (const auto& [fn, value] : table.entries) {
      Json entry;
      entry["fn"] = function_to_json(fn, tmpl.A.dom(), tmpl.B.dom());
      entry["value"] = rat_to_string(value);
      entries.push_back(std::move(entry));
    }
    t["entries"] = std::move(entries);
    beta.push_back(std::move(t));
  }
  j["beta"] = std::move(beta);
  if (inst.cf_completeness)
    j["cf_completeness"] = rat_to_string(*inst.cf_completeness);
  if (inst.cert) {
    Json cert;
    Json weights = Json::array();
    for (const Rat& w : inst.cert->weights) weights.push_back(rat_to_string(w));
    cert["weights"] = std::move(weights);
    Json symbols = Json::array();
    for (int s : inst.cert->symbols)
      symbols.push_back(tmpl.A.sig().symbols[s].id);
    cert["symbols"] = std::move(symbols);
    cert["c"] = rat_to_string(inst.cert->c);
    cert["s"] = rat_to_string(inst.cert->s);
    j["cert"] = std::move(cert);
  }
  return j;
}

VMCInstance vmc_from_json(const Json& j, const ValuedTemplate& tmpl,
                          const std::string& where) {
  check_keys(j, {"mc", "alpha", "beta", "cf_completeness", "cert"}, where);
  VMCInstance inst;
  inst.mc = mc_from_json(member(j, "mc", where), jp(where, "mc"));

  const Json& alpha = as_array(member(j, "alpha", where), jp(where, "alpha"));
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const Json& row = as_array(alpha[i], jp(jp(where, "alpha"), i));
    std::vector<Rat> values;
    for (std::size_t z = 0; z < row.size(); ++z)
      values.push_back(rat_from_json(row[z], jp(jp(jp(where, "alpha"), i), z)));
    inst.alpha.push_back(std::move(values));
  }

  const Json& beta = as_array(member(j, "beta", where), jp(where, "beta"));
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const std::string bw = jp(jp(where, "beta"), i);
    check_keys(beta[i], {"default", "entries"}, bw);
    BetaTable table;
    table.default_value =
        rat_from_json(member(beta[i], "default", bw), jp(bw, "default"));
    const Json& entries =
        as_array(member(beta[i], "entries", bw), jp(bw, "entries"));
    for (std::size_t z = 0; z < entries.size(); ++z) {
      const std::string ew = jp(jp(bw, "entries"), z);
      check_keys(entries[z], {"fn", "value"}, ew);
      table.entries.emplace_back(
          function_from_json(member(entries[z], "fn", ew), tmpl.A.dom(),
                             tmpl.B.dom(), jp(ew, "fn")),
          rat_from_json(member(entries[z], "value", ew), jp(ew, "value")));
    }
    std::sort(table.entries.begin(), table.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    checked(bw, [&] { table.validate(); });
    inst.beta.push_back(std::move(table));
  }

  if (const Json* cf = opt_member(j, "cf_completeness", where))
    inst.cf_completeness = rat_from_json(*cf, jp(where, "cf_completeness"));
  if (const Json* cert = opt_member(j, "cert", where)) {
    const std::string cw = jp(where, "cert");
    check_keys(*cert, {"weights", "symbols", "c", "s"}, cw);
    StarStarCert sc;
    const Json& weights =
        as_array(member(*cert, "weights", cw), jp(cw, "weights"));
    for (std::size_t i = 0; i < weights.size(); ++i)
      sc.weights.push_back(rat_from_json(weights[i], jp(jp(cw, "weights"), i)));
    const Json& symbols =
        as_array(member(*cert, "symbols", cw), jp(cw, "symbols"));
    for (std::size_t i = 0; i < symbols.size(); ++i)
      sc.symbols.push_back(symbol_by_id(
          tmpl.A.sig(), as_string(symbols[i], jp(jp(cw, "symbols"), i)),
          jp(jp(cw, "symbols"), i)));
    sc.c = rat_from_json(member(*cert, "c", cw), jp(cw, "c"));
    sc.s = rat_from_json(member(*cert, "s", cw), jp(cw, "s"));
    inst.cert = std::move(sc);
  }
  checked(where, [&] { inst.validate(); });
  return inst;
}

std::map<int, Gadget> gadgets_from_json(const Json& j,
                                        const ValuedTemplate& src,
                                        const ValuedTemplate& tgt,
                                        const std::string& where) {
  check_keys(j, {"gadgets"}, where);
  const Json& gadgets = member(j, "gadgets", where);
  if (!gadgets.is_object())
    throw ParseError("expected an object", jp(where, "gadgets"));
  std::map<int, Gadget> out;
  for (auto it = gadgets.begin(); it != gadgets.end(); ++it) {
    const std::string gw = jp(jp(where, "gadgets"), it.key());
    const int sym = symbol_by_id(src.A.sig(), it.key(), gw);
    check_keys(it.value(), {"body", "coords", "shared"}, gw);
    Gadget g;
    g.body = formula_from_json(member(it.value(), "body", gw), tgt, jp(gw, "body"));
    const Json& coords =
        as_array(member(it.value(), "coords", gw), jp(gw, "coords"));
    if (coords.size() != src.A.sig().symbols[sym].arity.size())
      throw ParseError("coordinate count does not match the symbol arity",
                       jp(gw, "coords"));
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const std::string id = as_string(coords[i], jp(jp(gw, "coords"), i));
      const int v = g.body.vars.index_of(id);
      if (v < 0)
        throw ParseError("unknown body variable '" + id + "'",
                         jp(jp(gw, "coords"), i));
      g.coord_vars.push_back(v);
    }
    const Json& shared =
        as_array(member(it.value(), "shared", gw), jp(gw, "shared"));
    for (std::size_t i = 0; i < shared.size(); ++i) {
      const std::string id = as_string(shared[i], jp(jp(gw, "shared"), i));
      const int v = g.body.vars.index_of(id);
      if (v < 0)
        throw ParseError("unknown body variable '" + id + "'",
                         jp(jp(gw, "shared"), i));
      g.shared_vars.push_back(v);
    }
    out.emplace(sym, std::move(g));
  }
  return out;
}

MatrixLift lift_from_json(const Json& j, const ValuedTemplate& src,
                          const ValuedTemplate& tgt, const std::string& where) {
  check_keys(j, {"symbol_map", "rows"}, where);
  MatrixLift lift;
  const Json& symbol_map = member(j, "symbol_map", where);
  if (!symbol_map.is_object())
    throw ParseError("expected an object", jp(where, "symbol_map"));
  lift.symbol_map.resize(src.A.sig().symbols.size(), -1);
  for (auto it = symbol_map.begin(); it != symbol_map.end(); ++it) {
    const std::string sw = jp(jp(where, "symbol_map"), it.key());
    const int s = symbol_by_id(src.A.sig(), it.key(), sw);
    lift.symbol_map[s] = symbol_by_id(tgt.A.sig(), as_string(it.value(), sw), sw);
  }
  for (std::size_t s = 0; s < lift.symbol_map.size(); ++s)
    if (lift.symbol_map[s] < 0)
      throw ParseError("missing image for symbol '" +
                           src.A.sig().symbols[s].id + "'",
                       jp(where, "symbol_map"));

  const Json& rows = member(j, "rows", where);
  if (!rows.is_object()) throw ParseError("expected an object", jp(where, "rows"));
  lift.rows.resize(lift.symbol_map.size());
  for (std::size_t s = 0; s < lift.symbol_map.size(); ++s) {
    const std::string& id = src.A.sig().symbols[s].id;
    auto it = rows.find(id);
    if (it == rows.end())
      throw ParseError("missing rows for symbol '" + id + "'", jp(where, "rows"));
    const std::string rw = jp(jp(where, "rows"), id);
    const Json& list = as_array(*it, rw);
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string lw = jp(rw, i);
      LiftRow row;
      if (const Json* src_row = opt_member(list[i], "row", lw)) {
        check_keys(list[i], {"row"}, lw);
        row.is_const = false;
        row.src_row = as_int(*src_row, jp(lw, "row"));
        if (row.src_row < 0 ||
            row.src_row >=
                static_cast<int>(src.A.sig().symbols[s].arity.size()))
          throw ParseError("source row out of range", jp(lw, "row"));
      } else {
        check_keys(list[i], {"const"}, lw);
        row.is_const = true;
        row.const_elem = element_by_id(
            tgt.A.dom(), as_string(member(list[i], "const", lw), jp(lw, "const")),
            jp(lw, "const"));
      }
      lift.rows[s].push_back(row);
    }
  }
  return lift;
}

Json hom_table_to_json(const MinionHomTable& t) {
  Json j;
  j["k"] = t.k;
  Json maps = Json::array();
  for (const auto& level : t.maps) {
    Json entries = Json::array();
    for (const auto& [src, dst] : level) {
      Json entry;
      entry["src"] = function_to_json(src, t.src_dom, t.src_cod);
      entry["dst"] = function_to_json(dst, t.tgt_dom, t.tgt_cod);
      entries.push_back(std::move(entry));
    }
    maps.push_back(std::move(entries));
  }
  j["maps"] = std::move(maps);
  return j;
}

MinionHomTable hom_table_from_json(const Json& j, const SortedSet& src_dom,
                                   const SortedSet& src_cod,
                                   const SortedSet& tgt_dom,
                                   const SortedSet& tgt_cod,
                                   const std::string& where) {
  check_keys(j, {"k", "maps"}, where);
  MinionHomTable t;
  t.k = as_int(member(j, "k", where), jp(where, "k"));
  if (t.k < 1) throw ParseError("k must be positive", jp(where, "k"));
  t.src_dom = src_dom;
  t.src_cod = src_cod;
  t.tgt_dom = tgt_dom;
  t.tgt_cod = tgt_cod;
  const Json& maps = as_array(member(j, "maps", where), jp(where, "maps"));
  if (static_cast<int>(maps.size()) != t.k)
    throw ParseError("expected one map per arity up to k", jp(where, "maps"));
  t.maps.resize(t.k);
  for (int n = 1; n <= t.k; ++n) {
    const std::string mw = jp(jp(where, "maps"), static_cast<std::size_t>(n - 1));
    const Json& level = as_array(maps[n - 1], mw);
    for (std::size_t i = 0; i < level.size(); ++i) {
      const std::string ew = jp(mw, i);
      check_keys(level[i], {"src", "dst"}, ew);
      NaryFunction src = function_from_json(member(level[i], "src", ew),
                                            src_dom, src_cod, jp(ew, "src"));
      NaryFunction dst = function_from_json(member(level[i], "dst", ew),
                                            tgt_dom, tgt_cod, jp(ew, "dst"));
      if (src.arity != n || dst.arity != n)
        throw ParseError("function arity does not match the map level", ew);
      if (!t.maps[n - 1].emplace(std::move(src), std::move(dst)).second)
        throw ParseError("duplicate source function", ew);
    }
  }
  return t;
}

ValuedMinionHom valued_hom_from_json(const Json& j, const SortedSet& src_dom,
                                     const SortedSet& src_cod,
                                     const SortedSet& tgt_dom,
                                     const SortedSet& tgt_cod,
                                     const std::string& where) {
  check_keys(j, {"tables"}, where);
  ValuedMinionHom hom;
  const Json& tables = as_array(member(j, "tables", where), jp(where, "tables"));
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const std::string tw = jp(jp(where, "tables"), i);
    check_keys(tables[i], {"table", "w"}, tw);
    MinionHomTable t =
        hom_table_from_json(member(tables[i], "table", tw), src_dom, src_cod,
                            tgt_dom, tgt_cod, jp(tw, "table"));
    Rat w = rat_from_json(member(tables[i], "w", tw), jp(tw, "w"));
    hom.tables.emplace_back(std::move(t), std::move(w));
  }
  checked(where, [&] { hom.validate(); });
  return hom;
}

PPTarget pp_target_from_json(const Json& j, const ValuedTemplate& tmpl,
                             const std::string& where) {
  check_keys(j, {"coord_sorts", "table_a", "table_b"}, where);
  PPTarget target;
  const Json& sorts =
      as_array(member(j, "coord_sorts", where), jp(where, "coord_sorts"));
  for (std::size_t i = 0; i < sorts.size(); ++i)
    target.coord_sorts.push_back(sort_by_name(
        tmpl.A.sig(), as_string(sorts[i], jp(jp(where, "coord_sorts"), i)),
        jp(jp(where, "coord_sorts"), i)));

  const auto parse_table = [&](const char* key, const SortedSet& dom,
                               std::vector<Ext>& out) {
    std::int64_t total = 1;
    for (int t : target.coord_sorts)
      total *= static_cast<std::int64_t>(dom.of_sort(t).size());
    const Json& table = as_array(member(j, key, where), jp(where, key));
    if (static_cast<std::int64_t>(table.size()) != total)
      throw ParseError("table size does not match the coordinate sorts",
                       jp(where, key));
    for (std::size_t i = 0; i < table.size(); ++i)
      out.push_back(ext_from_json(table[i], jp(jp(where, key), i)));
  };
  parse_table("table_a", tmpl.A.dom(), target.table_a);
  parse_table("table_b", tmpl.B.dom(), target.table_b);
  return target;
}

Json pp_definition_to_json(const PPDefinition& d) {
  Json j;
  j["formula"] = formula_to_json(d.formula);
  Json iota = Json::array();
  for (int v : d.iota) iota.push_back(d.formula.vars.id(v));
  j["iota"] = std::move(iota);
  return j;
}

PPDefinition pp_definition_from_json(const Json& j, const ValuedTemplate& tmpl,
                                     const std::string& where) {
  check_keys(j, {"formula", "iota"}, where);
  PPDefinition d;
  d.formula =
      formula_from_json(member(j, "formula", where), tmpl, jp(where, "formula"));
  const Json& iota = as_array(member(j, "iota", where), jp(where, "iota"));
  for (std::size_t i = 0; i < iota.size(); ++i) {
    const std::string id = as_string(iota[i], jp(jp(where, "iota"), i));
    const int v = d.formula.vars.index_of(id);
    if (v < 0)
      throw ParseError("unknown variable '" + id + "'", jp(jp(where, "iota"), i));
    d.iota.push_back(v);
  }
  return d;
}

Json glc_report_to_json(const GlcReport& r) {
  Json j;
  j["ok"] = r.ok;
  j["maps_checked"] = r.maps_checked;
  j["pairs_checked"] = r.pairs_checked;
  j["condition1_ok"] = r.condition1_ok;
  j["condition2_ok"] = r.condition2_ok;
  j["condition1_min"] = rat_to_string(r.condition1_min);
  j["condition2_min_margin"] = rat_to_string(r.condition2_min_margin);
  j["violation_count"] = r.violation_count;
  j["violations"] = r.violations;
  return j;
}

Json fourier_expansion_to_json(const FourierExpansion& ex) {
  Json j;
  j["arity"] = ex.arity;
  Json coefficients = Json::object();
  for (std::uint32_t subset = 0; subset < ex.coef.size(); ++subset)
    if (ex.coef[subset] != 0)
      coefficients[subset_name(subset)] = rat_to_string(ex.coef[subset]);
  j["coefficients"] = std::move(coefficients);
  return j;
}

PmFunction pm_from_json(const Json& j, const std::string& where) {
  const Json& arr = as_array(j, where);
  if (arr.empty() || (arr.size() & (arr.size() - 1)) != 0)
    throw ParseError("table length must be a power of two", where);
  PmFunction f;
  f.arity = 0;
  while ((std::size_t{1} << f.arity) < arr.size()) ++f.arity;
  for (std::size_t i = 0; i < arr.size(); ++i)
    f.table.push_back(as_int(arr[i], jp(where, i)));
  checked(where, [&] { f.validate(); });
  return f;
}

}  // namespace pvcsp
