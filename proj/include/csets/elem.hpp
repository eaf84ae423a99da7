#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace csets {

// One point of a finite carrier. Elements form a small closed tree language so that
// every categorical construction has a canonical concrete representation:
//
//   Atom   named generator ("tt", "e0", ...)
//   Star   the point of a terminal object
//   Pair   a point of a binary product
//   Inl    a point of the left coproduct summand
//   Inr    a point of the right coproduct summand
//   Fun    a point of an exponential: a finite lookup table, rows sorted by argument
//   Class  a point of a quotient: the member set of one equivalence class, sorted
//
// Elements are immutable and cheaply copyable (shared representation). They carry a
// total order — kind rank Atom < Star < Pair < Inl < Inr < Fun < Class, then
// lexicographic within a kind — which fixes the canonical ordering of carriers,
// relations and enumerations everywhere else.
class Elem {
 public:
  enum class Kind : std::uint8_t { Atom, Star, Pair, Inl, Inr, Fun, Class };

  static Elem atom(std::string name);
  static Elem star();
  static Elem pair(Elem first, Elem second);
  static Elem inl(Elem value);
  static Elem inr(Elem value);
  // Rows are sorted by argument; duplicate arguments are a programming error.
  static Elem fun(std::vector<std::pair<Elem, Elem>> rows);
  // Members are sorted and deduplicated.
  static Elem cls(std::vector<Elem> members);

  Kind kind() const { return rep_->kind; }
  const std::string& atom_name() const;
  const Elem& first() const;
  const Elem& second() const;
  const Elem& inner() const;  // Inl / Inr payload
  const std::vector<std::pair<Elem, Elem>>& rows() const;
  const std::vector<Elem>& members() const;

  // Fun table lookup; throws if the argument has no row.
  const Elem& apply(const Elem& argument) const;

  std::string str() const;

  friend int compare(const Elem& a, const Elem& b);
  friend bool operator==(const Elem& a, const Elem& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Elem& a, const Elem& b) { return compare(a, b) != 0; }
  friend bool operator<(const Elem& a, const Elem& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Elem& a, const Elem& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Elem& a, const Elem& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Elem& a, const Elem& b) { return compare(a, b) >= 0; }

 private:
  struct Rep {
    Kind kind;
    std::string name;                            // Atom
    std::vector<Elem> kids;                      // Pair / Inl / Inr / Class
    std::vector<std::pair<Elem, Elem>> table;    // Fun
  };

  explicit Elem(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  std::shared_ptr<const Rep> rep_;
};

std::ostream& operator<<(std::ostream& os, const Elem& e);

}  // namespace csets
