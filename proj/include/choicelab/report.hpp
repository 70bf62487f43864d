#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bits.hpp"

namespace choicelab
{

/// What a witness variable ranges over.
enum class Domain
{
  models,   ///< a set of models
  formulas, ///< a set of formulas
  formula   ///< a single formula
};

/// One variable of a violating assignment, e.g. `X = {m1, m2}`.
struct Binding
{
  std::string var;
  Domain domain = Domain::models;
  Mask bits = 0; ///< for Domain::formula, the singleton mask of the formula
  std::vector<std::string> names;

  friend bool operator==( const Binding&, const Binding& ) = default;
};

/// Verdict for one property, with the first violating assignment when it fails.
struct PropertyReport
{
  PropertyReport() = default;
  explicit PropertyReport( std::string name ) : property( std::move( name ) ) {}

  std::string property;
  bool holds = true;
  bool skipped = false;
  std::string reason;        ///< why the check was skipped
  std::uint64_t checked = 0; ///< instances visited
  std::vector<Binding> witness;

  bool ok() const noexcept { return skipped || holds; }

  friend bool operator==( const PropertyReport&, const PropertyReport& ) = default;
};

inline PropertyReport skipped_report( std::string property, std::string reason )
{
  PropertyReport r;
  r.property = std::move( property );
  r.skipped = true;
  r.holds = false;
  r.reason = std::move( reason );
  return r;
}

struct TheoremReport
{
  std::string theorem;
  std::vector<PropertyReport> hypotheses;
  std::vector<PropertyReport> conclusions;
  std::vector<PropertyReport> identities;
  bool overall = false;
  std::string note;

  /// Overall verdict: every hypothesis holds and no conclusion or identity fails or is skipped.
  void finalize()
  {
    overall = true;
    for ( const auto* group : { &hypotheses, &conclusions, &identities } )
      for ( const auto& r : *group )
        if ( r.skipped || !r.holds )
          overall = false;
  }

  const PropertyReport* find( const std::string& property ) const
  {
    for ( const auto* group : { &hypotheses, &conclusions, &identities } )
      for ( const auto& r : *group )
        if ( r.property == property )
          return &r;
    return nullptr;
  }

  std::vector<const PropertyReport*> failures() const
  {
    std::vector<const PropertyReport*> out;
    for ( const auto* group : { &hypotheses, &conclusions, &identities } )
      for ( const auto& r : *group )
        if ( !r.skipped && !r.holds )
          out.push_back( &r );
    return out;
  }
};

} // namespace choicelab
