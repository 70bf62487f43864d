#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bits.hpp"
#include "errors.hpp"
#include "frame.hpp"
#include "report.hpp"

namespace choicelab
{

enum class ChoiceProperty
{
  contraction,             ///< f(X) ⊆ X
  coherence,               ///< X ⊆ Y ⇒ X ∩ f(Y) ⊆ f(X)
  local_monotonicity,      ///< f(Y) ⊆ X ⊆ Y ⇒ f(X) ⊆ f(Y)
  expansion,               ///< f(X) ∩ f(Y) ⊆ f(X ∪ Y)
  arrow,                   ///< X ⊆ Y, X ∩ f(Y) ≠ ∅ ⇒ f(X) = X ∩ f(Y)
  definability_preserving, ///< X definable ⇒ f(X) definable
  hull_compatibility,      ///< f(X) ⊆ f(hull(X))
  nonempty                 ///< X ≠ ∅ ⇒ f(X) ≠ ∅
};

inline constexpr std::array kAllChoiceProperties = {
    ChoiceProperty::contraction,        ChoiceProperty::coherence,
    ChoiceProperty::local_monotonicity, ChoiceProperty::expansion,
    ChoiceProperty::arrow,              ChoiceProperty::definability_preserving,
    ChoiceProperty::hull_compatibility, ChoiceProperty::nonempty };

inline constexpr std::string_view name_of( ChoiceProperty p ) noexcept
{
  switch ( p )
  {
  case ChoiceProperty::contraction: return "contraction";
  case ChoiceProperty::coherence: return "coherence";
  case ChoiceProperty::local_monotonicity: return "local-mono";
  case ChoiceProperty::expansion: return "expansion";
  case ChoiceProperty::arrow: return "arrow";
  case ChoiceProperty::definability_preserving: return "dp";
  case ChoiceProperty::hull_compatibility: return "hull";
  case ChoiceProperty::nonempty: return "nonempty";
  }
  return "?";
}

inline std::optional<ChoiceProperty> parse_choice_property( std::string_view name ) noexcept
{
  for ( auto p : kAllChoiceProperties )
    if ( name_of( p ) == name )
      return p;
  return std::nullopt;
}

/// Properties whose statement mentions definability and therefore need a frame.
inline constexpr bool needs_frame( ChoiceProperty p ) noexcept
{
  return p == ChoiceProperty::definability_preserving || p == ChoiceProperty::hull_compatibility;
}

inline constexpr bool is_binary( ChoiceProperty p ) noexcept
{
  return p == ChoiceProperty::coherence || p == ChoiceProperty::local_monotonicity ||
         p == ChoiceProperty::expansion || p == ChoiceProperty::arrow;
}

enum class Scope
{
  all_subsets,
  definable_only
};

/*! \brief Choice function on the subsets of a finite ground set.

  Either an explicit table with one entry per subset, or the preferential
  form that keeps the unbeaten elements of a set. In the preferential form
  an edge (x, y) means x beats y: y is discarded whenever x is present.
*/
class ChoiceFunction
{
public:
  struct Table
  {
    std::vector<Mask> values; ///< indexed by subset mask; kUndefined for a missing entry
  };
  struct Preference
  {
    std::vector<std::pair<int, int>> edges;
    std::vector<Mask> beaten_by; ///< beaten_by[y] = {x : (x, y) is an edge}
  };

  ChoiceFunction() = default;

  static ChoiceFunction table( int width, std::vector<Mask> values )
  {
    if ( width < 0 || width > kMaxTableWidth )
      throw InputError( "choice table over " + std::to_string( width ) + " models exceeds the cap of " +
                        std::to_string( kMaxTableWidth ) );
    if ( values.size() != ( std::size_t{ 1 } << width ) )
      throw InputError( "choice table must have 2^" + std::to_string( width ) + " entries" );
    for ( Mask v : values )
      if ( v != kUndefined && !is_subset( v, low_bits( width ) ) )
        throw InputError( "choice table value outside the ground set" );
    ChoiceFunction f;
    f.width_ = width;
    f.rep_ = Table{ std::move( values ) };
    return f;
  }

  static ChoiceFunction identity( int width )
  {
    std::vector<Mask> values( std::size_t{ 1 } << width );
    for ( std::size_t x = 0; x < values.size(); ++x )
      values[x] = x;
    return table( width, std::move( values ) );
  }

  static ChoiceFunction preferential( int width, std::vector<std::pair<int, int>> edges )
  {
    if ( width < 0 || width > kMaxWidth )
      throw InputError( "preference over " + std::to_string( width ) + " models exceeds the cap of 62" );
    Preference pref;
    pref.beaten_by.assign( width, 0 );
    for ( auto [x, y] : edges )
    {
      if ( x < 0 || y < 0 || x >= width || y >= width )
        throw InputError( "preference edge references an unknown model" );
      if ( x == y )
        throw InputError( "preference edge is a self-pair (relation must be irreflexive)" );
      pref.beaten_by[y] |= bit( x );
    }
    pref.edges = std::move( edges );
    ChoiceFunction f;
    f.width_ = width;
    f.rep_ = std::move( pref );
    return f;
  }

  int width() const noexcept { return width_; }
  bool is_table() const noexcept { return std::holds_alternative<Table>( rep_ ); }
  const Table* as_table() const noexcept { return std::get_if<Table>( &rep_ ); }
  const Preference* as_preference() const noexcept { return std::get_if<Preference>( &rep_ ); }

  Mask apply_mask( Mask x ) const
  {
    if ( const auto* t = as_table() )
    {
      Mask v = t->values.at( x );
      if ( v == kUndefined )
        throw InputError( "choice table has no entry for subset " + std::to_string( x ) );
      return v;
    }
    const auto& beaten_by = std::get<Preference>( rep_ ).beaten_by;
    Mask out = x;
    for ( Mask m = x; m; m &= m - 1 )
    {
      int y = std::countr_zero( m );
      if ( beaten_by[y] & x )
        out &= ~bit( y );
    }
    return out;
  }

  /// Full table over all 2^width subsets.
  std::vector<Mask> materialize() const
  {
    if ( const auto* t = as_table() )
    {
      for ( std::size_t x = 0; x < t->values.size(); ++x )
        if ( t->values[x] == kUndefined )
          throw InputError( "choice table has no entry for subset " + std::to_string( x ) );
      return t->values;
    }
    if ( width_ > kMaxTableWidth )
      throw InputError( "cannot tabulate a choice function over more than 20 models" );
    std::vector<Mask> out( std::size_t{ 1 } << width_ );
    for ( std::size_t x = 0; x < out.size(); ++x )
      out[x] = apply_mask( x );
    return out;
  }

  ChoiceFunction to_table() const { return table( width_, materialize() ); }

  /// True iff the preference relation is transitive (it is irreflexive by construction).
  bool is_strict_partial_order() const
  {
    const auto* p = as_preference();
    if ( !p )
      return false;
    return !transitivity_gap().has_value();
  }

  /// First (x, z) with x beats y, y beats z, but not x beats z.
  std::optional<std::pair<int, int>> transitivity_gap() const
  {
    const auto& beaten_by = std::get<Preference>( rep_ ).beaten_by;
    for ( auto [x, y] : std::get<Preference>( rep_ ).edges )
      for ( int z = 0; z < width_; ++z )
        if ( has_bit( beaten_by[z], y ) && !has_bit( beaten_by[z], x ) )
          return std::make_pair( x, z );
    return std::nullopt;
  }

private:
  int width_ = 0;
  std::variant<Table, Preference> rep_ = Table{ { 0 } };
};

inline ModelSet apply( const FiniteFrame& frame, const ChoiceFunction& f, const ModelSet& x )
{
  require_models( frame, x );
  if ( f.width() != frame.model_count() )
    throw InputError( "choice function width does not match the frame" );
  return frame.model_set( f.apply_mask( x.bits() ) );
}

/// Preferential choice function from named edges; optionally insists on a strict partial order.
inline ChoiceFunction make_preferential( const FiniteFrame& frame,
                                         const std::vector<std::pair<std::string, std::string>>& edges,
                                         bool require_strict_partial_order )
{
  std::vector<std::pair<int, int>> idx;
  for ( const auto& [a, b] : edges )
  {
    auto x = frame.model_index( a );
    auto y = frame.model_index( b );
    if ( !x )
      throw InputError( "edges: unknown model \"" + a + "\"" );
    if ( !y )
      throw InputError( "edges: unknown model \"" + b + "\"" );
    if ( *x == *y )
      throw InputError( "edges: self-pair (\"" + a + "\", \"" + b + "\") violates irreflexivity" );
    idx.emplace_back( *x, *y );
  }
  auto f = ChoiceFunction::preferential( frame.model_count(), std::move( idx ) );
  if ( require_strict_partial_order )
  {
    if ( auto gap = f.transitivity_gap() )
      throw InputError( "edges: not transitive, (\"" + frame.models()[gap->first] + "\", \"" +
                        frame.models()[gap->second] + "\") is missing" );
  }
  return f;
}

/// Outcome of a table-level property check.
struct TableCheck
{
  bool holds = true;
  std::uint64_t checked = 0;
  Mask x = 0;
  Mask y = 0;
};

/*! \brief Exhaustively checks one property of a tabulated choice function.

  `f` has 2^n entries. `hull` is either empty (bare ground set) or holds the
  definable hull of every subset. Instances are visited in lexicographic
  order of (X, Y) by bit value, so the reported violation is the first one.
*/
inline TableCheck check_choice_table( std::span<const Mask> f, int n, ChoiceProperty p, Scope scope,
                                      std::span<const Mask> hull )
{
  const bool framed = !hull.empty();
  if ( !framed && ( needs_frame( p ) || scope == Scope::definable_only ) )
    throw InputError( std::string( "property " ) + std::string( name_of( p ) ) +
                      " requires a frame (definability is undefined on a bare ground set)" );
  const Mask universe = low_bits( n );
  const Mask count = Mask{ 1 } << n;
  const bool all = scope == Scope::all_subsets;
  auto in_scope = [&]( Mask x ) { return all || hull[x] == x; };

  TableCheck out;
  auto fail = [&]( Mask x, Mask y ) {
    out.holds = false;
    out.x = x;
    out.y = y;
  };

  switch ( p )
  {
  case ChoiceProperty::contraction:
  case ChoiceProperty::hull_compatibility:
  case ChoiceProperty::nonempty:
    for ( Mask x = 0; x < count; ++x )
    {
      if ( !in_scope( x ) )
        continue;
      ++out.checked;
      bool ok = p == ChoiceProperty::contraction ? is_subset( f[x], x )
                : p == ChoiceProperty::nonempty  ? ( x == 0 || f[x] != 0 )
                                                 : is_subset( f[x], f[hull[x]] );
      if ( !ok )
      {
        fail( x, 0 );
        return out;
      }
    }
    return out;

  case ChoiceProperty::definability_preserving:
    for ( Mask x = 0; x < count; ++x )
    {
      if ( hull[x] != x )
        continue;
      ++out.checked;
      if ( hull[f[x]] != f[x] )
      {
        fail( x, 0 );
        return out;
      }
    }
    return out;

  case ChoiceProperty::expansion:
    for ( Mask x = 0; x < count; ++x )
    {
      if ( !in_scope( x ) )
        continue;
      for ( Mask y = 0; y < count; ++y )
      {
        if ( !in_scope( y ) )
          continue;
        ++out.checked;
        if ( !is_subset( f[x] & f[y], f[x | y] ) )
        {
          fail( x, y );
          return out;
        }
      }
    }
    return out;

  case ChoiceProperty::coherence:
  case ChoiceProperty::local_monotonicity:
  case ChoiceProperty::arrow:
    for ( Mask x = 0; x < count; ++x )
    {
      if ( !in_scope( x ) )
        continue;
      bool failed = any_superset( x, universe, [&]( Mask y ) {
        if ( !in_scope( y ) )
          return false;
        ++out.checked;
        bool ok = true;
        if ( p == ChoiceProperty::coherence )
          ok = is_subset( x & f[y], f[x] );
        else if ( p == ChoiceProperty::local_monotonicity )
          ok = !is_subset( f[y], x ) || is_subset( f[x], f[y] );
        else
          ok = ( x & f[y] ) == 0 || f[x] == ( x & f[y] );
        if ( !ok )
          fail( x, y );
        return !ok;
      } );
      if ( failed )
        return out;
    }
    return out;
  }
  return out;
}

/// Hull of every subset of the frame's models.
inline std::vector<Mask> hull_table( const FiniteFrame& frame )
{
  if ( frame.model_count() > kMaxTableWidth )
    throw InputError( "cannot enumerate subsets of more than 20 models" );
  std::vector<Mask> hull( std::size_t{ 1 } << frame.model_count() );
  for ( std::size_t x = 0; x < hull.size(); ++x )
    hull[x] = frame.hull_mask( x );
  return hull;
}

/*! \brief Evaluates choice-side properties of one function.

  Tabulates the function (and the frame's hulls) once so that several
  properties can be checked without recomputation.
*/
class ChoiceEvaluator
{
public:
  ChoiceEvaluator( const FiniteFrame& frame, const ChoiceFunction& f )
      : n_( frame.model_count() ), names_( frame.models() ), table_( f.materialize() ), hull_( hull_table( frame ) )
  {
    if ( f.width() != n_ )
      throw InputError( "choice function width does not match the frame" );
  }

  /// Bare ground set {1, ..., n}; frame-dependent properties are unavailable.
  ChoiceEvaluator( int n, const ChoiceFunction& f ) : n_( n ), table_( f.materialize() )
  {
    if ( f.width() != n_ )
      throw InputError( "choice function width does not match the ground set" );
    for ( int i = 0; i < n; ++i )
      names_.push_back( std::to_string( i + 1 ) );
  }

  PropertyReport evaluate( ChoiceProperty p, Scope scope = Scope::all_subsets ) const
  {
    auto res = check_choice_table( table_, n_, p, scope, hull_ );
    PropertyReport r;
    r.property = std::string( name_of( p ) );
    r.holds = res.holds;
    r.checked = res.checked;
    if ( !res.holds )
    {
      r.witness.push_back( binding( "X", res.x ) );
      if ( is_binary( p ) )
        r.witness.push_back( binding( "Y", res.y ) );
    }
    return r;
  }

  std::span<const Mask> table() const noexcept { return table_; }
  std::span<const Mask> hulls() const noexcept { return hull_; }

private:
  Binding binding( std::string var, Mask m ) const
  {
    Binding b{ std::move( var ), Domain::models, m, {} };
    for ( int i : indices_of( m ) )
      b.names.push_back( names_[i] );
    return b;
  }

  int n_;
  std::vector<std::string> names_;
  std::vector<Mask> table_;
  std::vector<Mask> hull_;
};

inline PropertyReport eval_choice_property( const FiniteFrame& frame, const ChoiceFunction& f, ChoiceProperty p,
                                            Scope scope = Scope::all_subsets )
{
  return ChoiceEvaluator( frame, f ).evaluate( p, scope );
}

} // namespace choicelab
