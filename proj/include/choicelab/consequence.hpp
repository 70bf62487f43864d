#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "bits.hpp"
#include "choice.hpp"
#include "connectives.hpp"
#include "errors.hpp"
#include "frame.hpp"
#include "report.hpp"

namespace choicelab
{

enum class ConsequenceProperty
{
  inclusion,                ///< A ⊆ C(A)
  idempotence,              ///< C(C(A)) = C(A)
  cautious_monotonicity,    ///< A ⊆ B ⊆ C(A) ⇒ C(A) ⊆ C(B)
  conditional_monotonicity, ///< A ⊆ B ⊆ C(A) ⇒ C(B) ⊆ C(A)
  threshold_monotonicity,   ///< C(A) ⊆ X ⊆ Y ⇒ C(X) ⊆ C(Y)
  cumulativity,             ///< A ⊆ B ⊆ C(A) ⇒ C(A) = C(B)
  property_e,               ///< C(⋂_{F ⊇ A or F ⊇ B} C(F)) ⊆ C(C(A) ∪ C(B))
  distributivity,           ///< C(A) ∩ C(B) ⊆ C(Th Mod A ∩ Th Mod B)
  weak_compactness,         ///< C(A) = L ⇒ C(B) = L for some finite B ⊆ A
  or_left_intro,            ///< C(A, a) ∩ C(A, b) ⊆ C(A, a ∨ b)
  or_right_intro,           ///< a ∈ C(A) ⇒ a ∨ b ∈ C(A)
  neg_left_intro,           ///< C(A, a, ¬a) = L
  neg_left_elim             ///< C(A, ¬a) = L ⇒ a ∈ C(A)
};

inline constexpr std::array kAllConsequenceProperties = {
    ConsequenceProperty::inclusion,
    ConsequenceProperty::idempotence,
    ConsequenceProperty::cautious_monotonicity,
    ConsequenceProperty::conditional_monotonicity,
    ConsequenceProperty::threshold_monotonicity,
    ConsequenceProperty::cumulativity,
    ConsequenceProperty::property_e,
    ConsequenceProperty::distributivity,
    ConsequenceProperty::weak_compactness,
    ConsequenceProperty::or_left_intro,
    ConsequenceProperty::or_right_intro,
    ConsequenceProperty::neg_left_intro,
    ConsequenceProperty::neg_left_elim };

/// The five structural properties shared by both directions of the representation.
inline constexpr std::array kStructuralProperties = {
    ConsequenceProperty::inclusion, ConsequenceProperty::idempotence,
    ConsequenceProperty::cautious_monotonicity, ConsequenceProperty::conditional_monotonicity,
    ConsequenceProperty::threshold_monotonicity };

inline constexpr std::string_view name_of( ConsequenceProperty p ) noexcept
{
  switch ( p )
  {
  case ConsequenceProperty::inclusion: return "inclusion";
  case ConsequenceProperty::idempotence: return "idempotence";
  case ConsequenceProperty::cautious_monotonicity: return "cautious-mono";
  case ConsequenceProperty::conditional_monotonicity: return "conditional-mono";
  case ConsequenceProperty::threshold_monotonicity: return "threshold-mono";
  case ConsequenceProperty::cumulativity: return "cumulativity";
  case ConsequenceProperty::property_e: return "prop-e";
  case ConsequenceProperty::distributivity: return "distributivity";
  case ConsequenceProperty::weak_compactness: return "weak-compactness";
  case ConsequenceProperty::or_left_intro: return "or-left";
  case ConsequenceProperty::or_right_intro: return "or-right";
  case ConsequenceProperty::neg_left_intro: return "neg-intro";
  case ConsequenceProperty::neg_left_elim: return "neg-elim";
  }
  return "?";
}

inline std::optional<ConsequenceProperty> parse_consequence_property( std::string_view name ) noexcept
{
  for ( auto p : kAllConsequenceProperties )
    if ( name_of( p ) == name )
      return p;
  return std::nullopt;
}

inline constexpr bool needs_connectives( ConsequenceProperty p ) noexcept
{
  return p == ConsequenceProperty::or_left_intro || p == ConsequenceProperty::or_right_intro ||
         p == ConsequenceProperty::neg_left_intro || p == ConsequenceProperty::neg_left_elim;
}

/*! \brief Consequence operation on the subsets of a finite formula set.

  Explicit operations carry a full table. Derived operations wrap a frame
  and a choice function and compute C(A) = Th(f(Mod(A))); since that value
  depends on A only through Mod(A), it is memoized on Mod(A). The memo is
  shared between copies; concurrent writers always install the same value.
*/
class ConsequenceOperation
{
public:
  ConsequenceOperation() : rep_( Explicit{ { 0 } } ) {}

  static ConsequenceOperation explicit_table( std::vector<std::string> formulas, std::vector<Mask> table )
  {
    if ( formulas.size() > kMaxTableWidth )
      throw InputError( "explicit consequence tables are capped at 20 formulas" );
    const int l = static_cast<int>( formulas.size() );
    if ( table.size() != ( std::size_t{ 1 } << l ) )
      throw InputError( "consequence table must have 2^" + std::to_string( l ) + " entries" );
    for ( Mask v : table )
      if ( !is_subset( v, low_bits( l ) ) )
        throw InputError( "consequence table value outside the formula set" );
    ConsequenceOperation c;
    c.formulas_ = std::move( formulas );
    c.rep_ = Explicit{ std::move( table ) };
    return c;
  }

  static ConsequenceOperation derived( FiniteFrame frame, ChoiceFunction f )
  {
    if ( f.width() != frame.model_count() )
      throw InputError( "choice function width does not match the frame" );
    if ( const auto* t = f.as_table() )
      for ( Mask v : t->values )
        if ( v == kUndefined )
          throw InputError( "choice table is not total" );
    ConsequenceOperation c;
    c.formulas_ = frame.formulas();
    c.rep_ = Derived{ std::make_shared<const FiniteFrame>( std::move( frame ) ),
                      std::make_shared<const ChoiceFunction>( std::move( f ) ), std::make_shared<Memo>() };
    return c;
  }

  bool is_derived() const noexcept { return std::holds_alternative<Derived>( rep_ ); }
  int width() const noexcept { return static_cast<int>( formulas_.size() ); }
  const std::vector<std::string>& formulas() const noexcept { return formulas_; }
  Mask all_formulas() const noexcept { return low_bits( width() ); }

  const FiniteFrame* frame() const noexcept
  {
    const auto* d = std::get_if<Derived>( &rep_ );
    return d ? d->frame.get() : nullptr;
  }
  std::shared_ptr<const FiniteFrame> shared_frame() const noexcept
  {
    const auto* d = std::get_if<Derived>( &rep_ );
    return d ? d->frame : nullptr;
  }
  const ChoiceFunction* choice() const noexcept
  {
    const auto* d = std::get_if<Derived>( &rep_ );
    return d ? d->f.get() : nullptr;
  }
  const std::vector<Mask>* table() const noexcept
  {
    const auto* e = std::get_if<Explicit>( &rep_ );
    return e ? &e->table : nullptr;
  }

  Mask closure_mask( Mask a ) const
  {
    if ( const auto* e = std::get_if<Explicit>( &rep_ ) )
      return e->table.at( a );
    const auto& d = std::get<Derived>( rep_ );
    const Mask key = d.frame->mod_mask( a );
    {
      std::lock_guard lock( d.memo->mu );
      if ( auto it = d.memo->closure.find( key ); it != d.memo->closure.end() )
        return it->second;
    }
    const Mask value = d.frame->th_mask( d.f->apply_mask( key ) );
    std::lock_guard lock( d.memo->mu );
    d.memo->closure.emplace( key, value );
    return value;
  }

  /// Full table of closures over all 2^|L| formula sets.
  std::vector<Mask> materialize() const
  {
    if ( const auto* e = std::get_if<Explicit>( &rep_ ) )
      return e->table;
    if ( width() > kMaxTableWidth )
      throw InputError( "cannot tabulate a consequence operation over more than 20 formulas" );
    const auto& d = std::get<Derived>( rep_ );
    const std::size_t n = std::size_t{ 1 } << width();
    std::vector<Mask> mods( n ), out( n );
    std::unordered_map<Mask, Mask> local;
    mods[0] = d.frame->all_models();
    for ( std::size_t a = 0; a < n; ++a )
    {
      if ( a )
        mods[a] = mods[a & ( a - 1 )] & d.frame->column( std::countr_zero( a ) );
      auto [it, fresh] = local.try_emplace( mods[a], 0 );
      if ( fresh )
        it->second = d.frame->th_mask( d.f->apply_mask( mods[a] ) );
      out[a] = it->second;
    }
    return out;
  }

  /// ⋂ of C(F) over all F ⊇ A.
  Mask cap_supersets_mask( Mask a ) const
  {
    if ( const auto* e = std::get_if<Explicit>( &rep_ ) )
    {
      Mask out = all_formulas();
      for_each_superset( a, all_formulas(), [&]( Mask f ) { out &= e->table[f]; } );
      return out;
    }
    // Supersets of A have exactly the definable subsets of Mod(A) as extensions.
    const auto& d = std::get<Derived>( rep_ );
    const Mask mod = d.frame->mod_mask( a );
    Mask out = all_formulas();
    for ( Mask def : family() )
      if ( is_subset( def, mod ) )
        out &= d.frame->th_mask( d.f->apply_mask( def ) );
    return out;
  }

private:
  struct Memo
  {
    std::mutex mu;
    std::unordered_map<Mask, Mask> closure;
    std::once_flag family_once;
    std::vector<Mask> family;
  };
  struct Explicit
  {
    std::vector<Mask> table;
  };
  struct Derived
  {
    std::shared_ptr<const FiniteFrame> frame;
    std::shared_ptr<const ChoiceFunction> f;
    std::shared_ptr<Memo> memo;
  };

  const std::vector<Mask>& family() const
  {
    const auto& d = std::get<Derived>( rep_ );
    std::call_once( d.memo->family_once, [&] { d.memo->family = definable_family_masks( *d.frame ); } );
    return d.memo->family;
  }

  std::vector<std::string> formulas_;
  std::variant<Explicit, Derived> rep_;
};

inline void require_formulas( const ConsequenceOperation& c, const FormulaSet& a )
{
  if ( a.width() != c.width() )
    throw InputError( "formula set width " + std::to_string( a.width() ) + " does not match operation over " +
                      std::to_string( c.width() ) + " formulas" );
}

inline FormulaSet closure( const ConsequenceOperation& c, const FormulaSet& a )
{
  require_formulas( c, a );
  return FormulaSet( c.closure_mask( a.bits() ), c.width() );
}

inline FormulaSet cap_supersets( const ConsequenceOperation& c, const FormulaSet& a )
{
  require_formulas( c, a );
  return FormulaSet( c.cap_supersets_mask( a.bits() ), c.width() );
}

/// ⋂ of C(F) over all F with F ⊇ A or F ⊇ B (the operand of property (E)).
inline FormulaSet k_operand( const ConsequenceOperation& c, const FormulaSet& a, const FormulaSet& b )
{
  return cap_supersets( c, a ) & cap_supersets( c, b );
}

inline ConsequenceOperation to_explicit( const ConsequenceOperation& c )
{
  return ConsequenceOperation::explicit_table( c.formulas(), c.materialize() );
}

namespace detail
{

struct PairHash
{
  std::size_t operator()( const std::pair<Mask, Mask>& p ) const noexcept
  {
    return std::hash<Mask>{}( p.first * 0x9e3779b97f4a7c15ULL ^ ( p.second + 0x7f4a7c159e3779b9ULL ) );
  }
};

struct VectorHash
{
  std::size_t operator()( const std::vector<Mask>& v ) const noexcept
  {
    std::size_t h = 0xcbf29ce484222325ULL;
    for ( Mask m : v )
      h = ( h ^ m ) * 0x100000001b3ULL + ( h >> 29 );
    return h;
  }
};

/*! \brief First (A, B) in lexicographic order with bad(key[A], key[B]).

  Distinct keys are grouped so the predicate runs once per pair of key
  classes; the witness is still the lexicographically first index pair.
*/
template<class Bad>
std::optional<std::pair<Mask, Mask>> first_pair_violation( std::span<const std::pair<Mask, Mask>> keys, Bad bad )
{
  std::unordered_map<std::pair<Mask, Mask>, int, PairHash> ids;
  std::vector<int> id_of( keys.size() );
  std::vector<Mask> rep;
  std::vector<std::pair<Mask, Mask>> distinct;
  for ( std::size_t a = 0; a < keys.size(); ++a )
  {
    auto [it, fresh] = ids.try_emplace( keys[a], static_cast<int>( distinct.size() ) );
    if ( fresh )
    {
      distinct.push_back( keys[a] );
      rep.push_back( a );
    }
    id_of[a] = it->second;
  }
  const std::size_t k = distinct.size();
  std::vector<Mask> first_bad( k, kUndefined );
  for ( std::size_t i = 0; i < k; ++i )
    for ( std::size_t j = 0; j < k; ++j )
      if ( rep[j] < first_bad[i] && bad( distinct[i], distinct[j] ) )
        first_bad[i] = rep[j];
  for ( std::size_t a = 0; a < keys.size(); ++a )
    if ( first_bad[id_of[a]] != kUndefined )
      return std::make_pair( Mask{ a }, first_bad[id_of[a]] );
  return std::nullopt;
}

inline std::uint64_t pow3( int n )
{
  std::uint64_t r = 1;
  for ( int i = 0; i < n; ++i )
    r *= 3;
  return r;
}

/// Number of pairs (A', B') with A' ⊆ B' ⊆ universe and A' < a.
inline std::uint64_t subset_pairs_before( Mask a, int width )
{
  std::uint64_t r = 0;
  for ( Mask x = 0; x < a; ++x )
    r += std::uint64_t{ 1 } << ( width - popcount( x ) );
  return r;
}

/// 1-based rank of b among the supersets of a within the universe.
inline std::uint64_t superset_rank( Mask a, Mask b, Mask universe )
{
  return extract_bits( b & ~a, universe & ~a ) + 1;
}

} // namespace detail

/*! \brief Evaluates consequence-side properties of one operation.

  The operation is tabulated once over all 2^|L| formula sets; derived
  tables (cap over supersets, Th∘Mod) are computed on first use. Every
  check is exact and reports the lexicographically first violation in the
  nested enumeration order of its quantifiers. Binary checks group formula
  sets by the values the property depends on, so their cost tracks the
  number of distinct closure values rather than 4^|L|.
*/
class ConsequenceEvaluator
{
public:
  explicit ConsequenceEvaluator( const ConsequenceOperation& c, const FiniteFrame* frame = nullptr,
                                 const ConnectiveStructure* connectives = nullptr )
      : width_( c.width() ), full_( c.all_formulas() ), names_( c.formulas() ), table_( c.materialize() ),
        owned_frame_( frame ? nullptr : c.shared_frame() ), frame_( frame ? frame : owned_frame_.get() ),
        connectives_( connectives )
  {
    if ( frame_ && frame_->formulas() != names_ )
      throw InputError( "frame formulas do not match the operation's formulas" );
    if ( connectives_ )
    {
      connectives_->validate();
      if ( connectives_->size != width_ )
        throw InputError( "connective structure size does not match the operation's formulas" );
    }
  }

  int width() const noexcept { return width_; }
  std::span<const Mask> table() const noexcept { return table_; }
  Mask closure( Mask a ) const { return table_[a]; }
  const FiniteFrame* frame() const noexcept { return frame_; }

  /// cap[A] = ⋂_{F ⊇ A} C(F), by a downward sweep: cap[A] = C(A) ∩ ⋂_{i ∉ A} cap[A ∪ {i}].
  std::span<const Mask> cap() const
  {
    if ( cap_.empty() )
    {
      cap_.resize( table_.size() );
      for ( Mask a = table_.size(); a-- > 0; )
      {
        Mask v = table_[a];
        for ( Mask rest = full_ & ~a; rest; rest &= rest - 1 )
          v &= cap_[a | ( rest & -rest )];
        cap_[a] = v;
      }
    }
    return cap_;
  }

  /// thmod[A] = Th(Mod(A)) in the attached frame.
  std::span<const Mask> thmod() const
  {
    if ( !frame_ )
      throw InputError( "this check needs a frame; build the canonical frame first (see the `canonical` command)" );
    if ( thmod_.empty() )
    {
      thmod_.resize( table_.size() );
      std::unordered_map<Mask, Mask> th;
      for ( Mask a = 0; a < table_.size(); ++a )
      {
        Mask mod = frame_->mod_mask( a );
        auto [it, fresh] = th.try_emplace( mod, 0 );
        if ( fresh )
          it->second = frame_->th_mask( mod );
        thmod_[a] = it->second;
      }
    }
    return thmod_;
  }

  PropertyReport evaluate( ConsequenceProperty p ) const
  {
    if ( needs_connectives( p ) && !connectives_ )
      throw InputError( std::string( "property " ) + std::string( name_of( p ) ) +
                        " needs a connective structure (use a truth-table language)" );
    PropertyReport r;
    r.property = std::string( name_of( p ) );
    switch ( p )
    {
    case ConsequenceProperty::inclusion:
      unary( r, [&]( Mask a ) { return is_subset( a, table_[a] ); } );
      break;
    case ConsequenceProperty::idempotence:
      unary( r, [&]( Mask a ) { return table_[table_[a]] == table_[a]; } );
      break;
    case ConsequenceProperty::cautious_monotonicity:
      interval( r, []( Mask v, Mask cb ) { return is_subset( v, cb ); } );
      break;
    case ConsequenceProperty::conditional_monotonicity:
      interval( r, []( Mask v, Mask cb ) { return is_subset( cb, v ); } );
      break;
    case ConsequenceProperty::cumulativity:
      interval( r, []( Mask v, Mask cb ) { return v == cb; } );
      break;
    case ConsequenceProperty::threshold_monotonicity:
      threshold( r );
      break;
    case ConsequenceProperty::property_e: {
      auto caps = cap();
      std::vector<std::pair<Mask, Mask>> keys( table_.size() );
      for ( Mask a = 0; a < keys.size(); ++a )
        keys[a] = { caps[a], table_[a] };
      pairwise( r, keys, [&]( auto ka, auto kb ) {
        return !is_subset( table_[ka.first & kb.first], table_[ka.second | kb.second] );
      } );
      break;
    }
    case ConsequenceProperty::distributivity: {
      auto tm = thmod();
      std::vector<std::pair<Mask, Mask>> keys( table_.size() );
      for ( Mask a = 0; a < keys.size(); ++a )
        keys[a] = { table_[a], tm[a] };
      pairwise( r, keys, [&]( auto ka, auto kb ) {
        return !is_subset( ka.first & kb.first, table_[ka.second & kb.second] );
      } );
      break;
    }
    case ConsequenceProperty::weak_compactness:
      weak_compactness( r );
      break;
    case ConsequenceProperty::or_left_intro:
      or_left( r );
      break;
    case ConsequenceProperty::or_right_intro:
      or_right( r );
      break;
    case ConsequenceProperty::neg_left_intro:
      per_formula( r, [&]( Mask a, int x ) {
        return table_[a | bit( x ) | bit( connectives_->neg( x ) )] == full_;
      } );
      break;
    case ConsequenceProperty::neg_left_elim:
      per_formula( r, [&]( Mask a, int x ) {
        return table_[a | bit( connectives_->neg( x ) )] != full_ || has_bit( table_[a], x );
      } );
      break;
    }
    return r;
  }

  /*! \brief Pairwise check over all (A, B) given per-set keys.

    Public so that derived identities (theorem verifiers) reuse the same
    exact grouping; `bad(keyA, keyB)` flags a violation.
  */
  template<class Bad>
  void pairwise( PropertyReport& r, const std::vector<std::pair<Mask, Mask>>& keys, Bad bad,
                 const char* var_a = "A", const char* var_b = "B" ) const
  {
    const std::uint64_t n = table_.size();
    if ( auto w = detail::first_pair_violation( std::span<const std::pair<Mask, Mask>>( keys ), bad ) )
    {
      r.holds = false;
      r.checked = w->first * n + w->second + 1;
      r.witness = { formulas( var_a, w->first ), formulas( var_b, w->second ) };
      return;
    }
    r.checked = n * n;
  }

  /// Unary check over all A.
  template<class Ok>
  void unary( PropertyReport& r, Ok ok, const char* var = "A" ) const
  {
    for ( Mask a = 0; a < table_.size(); ++a )
    {
      ++r.checked;
      if ( !ok( a ) )
      {
        r.holds = false;
        r.witness = { formulas( var, a ) };
        return;
      }
    }
  }

  Binding formulas( std::string var, Mask m ) const
  {
    Binding b{ std::move( var ), Domain::formulas, m, {} };
    for ( int i : indices_of( m ) )
      b.names.push_back( names_[i] );
    return b;
  }

  Binding formula( std::string var, int i ) const
  {
    return Binding{ std::move( var ), Domain::formula, bit( i ), { names_[i] } };
  }

private:
  /*! Checks ∀A ⊆ B ⊆ C(A): ok(C(A), C(B)).

    Two exact strategies: scan each interval [A, C(A)] directly, or group A
    by v = C(A) and push "some B ⊆ v is bad" down the submask lattice of v.
    The cheaper one (by exact operation count) is used.
  */
  template<class Ok>
  void interval( PropertyReport& r, Ok ok ) const
  {
    const std::size_t n = table_.size();
    std::uint64_t direct_cost = 0;
    std::unordered_map<Mask, std::vector<Mask>> groups;
    for ( Mask a = 0; a < n; ++a )
    {
      if ( !is_subset( a, table_[a] ) )
        continue;
      direct_cost += std::uint64_t{ 1 } << popcount( table_[a] & ~a );
      groups[table_[a]].push_back( a );
    }
    std::uint64_t grouped_cost = 0;
    for ( const auto& [v, members] : groups )
      grouped_cost += ( std::uint64_t{ 1 } << popcount( v ) ) * ( popcount( v ) + 1 ) + members.size();

    auto first_bad_b = [&]( Mask a ) -> std::optional<Mask> {
      const Mask v = table_[a];
      std::optional<Mask> found;
      any_superset( a, v, [&]( Mask b ) {
        if ( ok( v, table_[b] ) )
          return false;
        found = b;
        return true;
      } );
      return found;
    };

    std::optional<Mask> witness_a;
    if ( direct_cost <= grouped_cost )
    {
      for ( Mask a = 0; a < n && !witness_a; ++a )
        if ( is_subset( a, table_[a] ) && first_bad_b( a ) )
          witness_a = a;
    }
    else
    {
      std::vector<char> bad( n, 0 );
      for ( const auto& [v, members] : groups )
      {
        for_each_submask( v, [&]( Mask b ) { bad[b] = !ok( v, table_[b] ); } );
        for ( Mask rest = v; rest; rest &= rest - 1 )
        {
          const Mask i = rest & -rest;
          for_each_submask( v & ~i, [&]( Mask s ) { bad[s] |= bad[s | i]; } );
        }
        for ( Mask a : members )
          if ( bad[a] )
          {
            if ( !witness_a || a < *witness_a )
              witness_a = a;
            break;
          }
      }
    }

    const Mask universe = full_;
    if ( !witness_a )
    {
      r.checked = detail::pow3( width_ );
      return;
    }
    const Mask b = *first_bad_b( *witness_a );
    r.holds = false;
    r.checked = detail::subset_pairs_before( *witness_a, width_ ) + detail::superset_rank( *witness_a, b, universe );
    r.witness = { formulas( "A", *witness_a ), formulas( "B", b ) };
  }

  /*! Checks ∀A, X, Y: C(A) ⊆ X ⊆ Y ⇒ C(X) ⊆ C(Y).

    X is bad iff X lies above some value of C and C(X) ⊄ cap(X). The first
    A is the first whose value lies below a bad X.
  */
  void threshold( PropertyReport& r ) const
  {
    const std::size_t n = table_.size();
    auto caps = cap();
    std::vector<char> above( n, 0 ), bad( n, 0 ), below_bad( n, 0 );
    for ( Mask a = 0; a < n; ++a )
      above[table_[a]] = 1;
    for ( Mask x = 1; x < n; ++x )
      for ( Mask rest = x; rest && !above[x]; rest &= rest - 1 )
        above[x] = above[x & ~( rest & -rest )];
    for ( Mask x = 0; x < n; ++x )
      bad[x] = above[x] && !is_subset( table_[x], caps[x] );
    for ( Mask x = n; x-- > 0; )
    {
      below_bad[x] = bad[x];
      for ( Mask rest = full_ & ~x; rest && !below_bad[x]; rest &= rest - 1 )
        below_bad[x] = below_bad[x | ( rest & -rest )];
    }
    const std::uint64_t per_a = detail::pow3( width_ );
    for ( Mask a = 0; a < n; ++a )
    {
      if ( !below_bad[table_[a]] )
        continue;
      Mask x = 0, y = 0;
      any_superset( table_[a], full_, [&]( Mask cand ) {
        if ( !bad[cand] )
          return false;
        x = cand;
        return true;
      } );
      any_superset( x, full_, [&]( Mask cand ) {
        if ( is_subset( table_[x], table_[cand] ) )
          return false;
        y = cand;
        return true;
      } );
      r.holds = false;
      r.checked = a * per_a + detail::subset_pairs_before( x, width_ ) + detail::superset_rank( x, y, full_ );
      r.witness = { formulas( "A", a ), formulas( "X", x ), formulas( "Y", y ) };
      return;
    }
    r.checked = n * per_a;
  }

  /// Existence of B ⊆ A with C(B) = L, propagated up the subset lattice.
  void weak_compactness( PropertyReport& r ) const
  {
    const std::size_t n = table_.size();
    std::vector<char> reachable( n, 0 );
    for ( Mask a = 0; a < n; ++a )
    {
      reachable[a] = table_[a] == full_;
      for ( Mask rest = a; rest && !reachable[a]; rest &= rest - 1 )
        reachable[a] = reachable[a & ~( rest & -rest )];
    }
    unary( r, [&]( Mask a ) { return table_[a] != full_ || reachable[a]; } );
  }

  template<class Ok>
  void per_formula( PropertyReport& r, Ok ok ) const
  {
    for ( Mask a = 0; a < table_.size(); ++a )
      for ( int x = 0; x < width_; ++x )
      {
        ++r.checked;
        if ( !ok( a, x ) )
        {
          r.holds = false;
          r.witness = { formulas( "A", a ), formula( "a", x ) };
          return;
        }
      }
  }

  /// Reports (A, a, b) as a failure of the triple check at position `checked`.
  void fail_triple( PropertyReport& r, Mask a, int x, int y ) const
  {
    const std::uint64_t l = width_;
    r.holds = false;
    r.checked = a * l * l + static_cast<std::uint64_t>( x ) * l + y + 1;
    r.witness = { formulas( "A", a ), formula( "a", x ), formula( "b", y ) };
  }

  /// C(A, a) ∩ C(A, b) ⊆ C(A, a ∨ b) depends on A only through the vector (C(A, x))_x.
  void or_left( PropertyReport& r ) const
  {
    std::unordered_map<std::vector<Mask>, char, detail::VectorHash> verdict;
    std::vector<Mask> key( width_ );
    auto first_bad = [&]( const std::vector<Mask>& k ) -> std::optional<std::pair<int, int>> {
      for ( int x = 0; x < width_; ++x )
        for ( int y = 0; y < width_; ++y )
          if ( !is_subset( k[x] & k[y], k[connectives_->disj( x, y )] ) )
            return std::make_pair( x, y );
      return std::nullopt;
    };
    for ( Mask a = 0; a < table_.size(); ++a )
    {
      for ( int x = 0; x < width_; ++x )
        key[x] = table_[a | bit( x )];
      auto [it, fresh] = verdict.try_emplace( key, 0 );
      if ( fresh )
        it->second = first_bad( key ) ? 1 : 0;
      if ( it->second )
      {
        auto [x, y] = *first_bad( key );
        fail_triple( r, a, x, y );
        return;
      }
    }
    r.checked = table_.size() * width_ * width_;
  }

  void or_right( PropertyReport& r ) const
  {
    std::unordered_map<Mask, char> verdict;
    auto first_bad = [&]( Mask v ) -> std::optional<std::pair<int, int>> {
      for ( int x = 0; x < width_; ++x )
        for ( int y = 0; y < width_; ++y )
          if ( has_bit( v, x ) && !has_bit( v, connectives_->disj( x, y ) ) )
            return std::make_pair( x, y );
      return std::nullopt;
    };
    for ( Mask a = 0; a < table_.size(); ++a )
    {
      auto [it, fresh] = verdict.try_emplace( table_[a], 0 );
      if ( fresh )
        it->second = first_bad( table_[a] ) ? 1 : 0;
      if ( it->second )
      {
        auto [x, y] = *first_bad( table_[a] );
        fail_triple( r, a, x, y );
        return;
      }
    }
    r.checked = table_.size() * width_ * width_;
  }

  int width_;
  Mask full_;
  std::vector<std::string> names_;
  std::vector<Mask> table_;
  std::shared_ptr<const FiniteFrame> owned_frame_; ///< keeps a derived operation's frame alive
  const FiniteFrame* frame_;
  const ConnectiveStructure* connectives_;
  mutable std::vector<Mask> cap_;
  mutable std::vector<Mask> thmod_;
};

inline PropertyReport eval_consequence_property( const ConsequenceOperation& c, ConsequenceProperty p,
                                                 const ConnectiveStructure* connectives = nullptr,
                                                 const FiniteFrame* frame = nullptr )
{
  return ConsequenceEvaluator( c, frame, connectives ).evaluate( p );
}

} // namespace choicelab
