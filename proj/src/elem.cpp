#include "csets/elem.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "csets/errors.hpp"

namespace csets {

namespace {

int kind_rank(Elem::Kind k) { return static_cast<int>(k); }

}  // namespace

Elem Elem::atom(std::string name) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Atom;
  rep->name = std::move(name);
  return Elem(std::move(rep));
}

Elem Elem::star() {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Star;
  return Elem(std::move(rep));
}

Elem Elem::pair(Elem first, Elem second) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Pair;
  rep->kids = {std::move(first), std::move(second)};
  return Elem(std::move(rep));
}

Elem Elem::inl(Elem value) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Inl;
  rep->kids = {std::move(value)};
  return Elem(std::move(rep));
}

Elem Elem::inr(Elem value) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Inr;
  rep->kids = {std::move(value)};
  return Elem(std::move(rep));
}

Elem Elem::fun(std::vector<std::pair<Elem, Elem>> rows) {
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.first < b.first;
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].first == rows[i].first) {
      fail("DuplicateElement", "function table has two rows for argument " + rows[i].first.str());
    }
  }
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Fun;
  rep->table = std::move(rows);
  return Elem(std::move(rep));
}

Elem Elem::cls(std::vector<Elem> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Class;
  rep->kids = std::move(members);
  return Elem(std::move(rep));
}

const std::string& Elem::atom_name() const {
  assert(kind() == Kind::Atom);
  return rep_->name;
}

const Elem& Elem::first() const {
  assert(kind() == Kind::Pair);
  return rep_->kids[0];
}

const Elem& Elem::second() const {
  assert(kind() == Kind::Pair);
  return rep_->kids[1];
}

const Elem& Elem::inner() const {
  assert(kind() == Kind::Inl || kind() == Kind::Inr);
  return rep_->kids[0];
}

const std::vector<std::pair<Elem, Elem>>& Elem::rows() const {
  assert(kind() == Kind::Fun);
  return rep_->table;
}

const std::vector<Elem>& Elem::members() const {
  assert(kind() == Kind::Class);
  return rep_->kids;
}

const Elem& Elem::apply(const Elem& argument) const {
  assert(kind() == Kind::Fun);
  auto it = std::lower_bound(rep_->table.begin(), rep_->table.end(), argument,
                             [](const auto& row, const Elem& a) { return row.first < a; });
  if (it == rep_->table.end() || it->first != argument) {
    fail("NotTotal", "function table has no row for argument " + argument.str());
  }
  return it->second;
}

int compare(const Elem& a, const Elem& b) {
  if (a.rep_ == b.rep_) return 0;
  if (int d = kind_rank(a.kind()) - kind_rank(b.kind()); d != 0) return d < 0 ? -1 : 1;
  switch (a.kind()) {
    case Elem::Kind::Atom:
      return a.rep_->name.compare(b.rep_->name) < 0   ? -1
             : a.rep_->name.compare(b.rep_->name) > 0 ? 1
                                                      : 0;
    case Elem::Kind::Star:
      return 0;
    case Elem::Kind::Fun: {
      const auto& ta = a.rep_->table;
      const auto& tb = b.rep_->table;
      for (std::size_t i = 0; i < std::min(ta.size(), tb.size()); ++i) {
        if (int d = compare(ta[i].first, tb[i].first); d != 0) return d;
        if (int d = compare(ta[i].second, tb[i].second); d != 0) return d;
      }
      return ta.size() < tb.size() ? -1 : ta.size() > tb.size() ? 1 : 0;
    }
    default: {
      const auto& ka = a.rep_->kids;
      const auto& kb = b.rep_->kids;
      for (std::size_t i = 0; i < std::min(ka.size(), kb.size()); ++i) {
        if (int d = compare(ka[i], kb[i]); d != 0) return d;
      }
      return ka.size() < kb.size() ? -1 : ka.size() > kb.size() ? 1 : 0;
    }
  }
}

std::ostream& operator<<(std::ostream& os, const Elem& e) {
  switch (e.kind()) {
    case Elem::Kind::Atom:
      return os << e.atom_name();
    case Elem::Kind::Star:
      return os << "*";
    case Elem::Kind::Pair:
      return os << "(" << e.first() << ", " << e.second() << ")";
    case Elem::Kind::Inl:
      return os << "inl " << e.inner();
    case Elem::Kind::Inr:
      return os << "inr " << e.inner();
    case Elem::Kind::Fun: {
      os << "[";
      bool first = true;
      for (const auto& [arg, out] : e.rows()) {
        if (!first) os << ", ";
        first = false;
        os << arg << " => " << out;
      }
      return os << "]";
    }
    case Elem::Kind::Class: {
      os << "{";
      bool first = true;
      for (const auto& m : e.members()) {
        if (!first) os << ", ";
        first = false;
        os << m;
      }
      return os << "}";
    }
  }
  return os;
}

std::string Elem::str() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

}  // namespace csets
