#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bits.hpp"
#include "errors.hpp"

namespace choicelab
{

/*! \brief Finite satisfaction frame: models, formulas, and their incidence.

  Models and formulas are opaque identifiers. Row `m` of the incidence is
  the set of formulas satisfied by model `m`; column `a` is the set of
  models satisfying formula `a`. Both are kept so that the two halves of
  the Mod/Th connection are a loop over set bits.
*/
class FiniteFrame
{
public:
  FiniteFrame() = default;

  FiniteFrame( std::vector<std::string> models, std::vector<std::string> formulas,
               const std::vector<std::vector<bool>>& sat )
      : models_( std::move( models ) ), formulas_( std::move( formulas ) )
  {
    check_names();
    if ( sat.size() != models_.size() )
      throw InputError( "satisfaction: expected " + std::to_string( models_.size() ) + " rows, got " +
                        std::to_string( sat.size() ) );
    rows_.assign( models_.size(), 0 );
    for ( std::size_t m = 0; m < sat.size(); ++m )
    {
      if ( sat[m].size() != formulas_.size() )
        throw InputError( "satisfaction: row " + std::to_string( m ) + " has " + std::to_string( sat[m].size() ) +
                          " entries, expected " + std::to_string( formulas_.size() ) );
      for ( std::size_t a = 0; a < sat[m].size(); ++a )
        if ( sat[m][a] )
          rows_[m] |= bit( static_cast<int>( a ) );
    }
    build_columns();
  }

  /// Builds a frame from per-model rows given as formula masks.
  static FiniteFrame from_rows( std::vector<std::string> models, std::vector<std::string> formulas,
                                std::vector<Mask> rows )
  {
    FiniteFrame fr;
    fr.models_ = std::move( models );
    fr.formulas_ = std::move( formulas );
    fr.check_names();
    if ( rows.size() != fr.models_.size() )
      throw InputError( "satisfaction: row count does not match model count" );
    for ( auto r : rows )
      if ( !is_subset( r, fr.all_formulas() ) )
        throw InputError( "satisfaction: row references a formula outside the frame" );
    fr.rows_ = std::move( rows );
    fr.build_columns();
    return fr;
  }

  int model_count() const noexcept { return static_cast<int>( models_.size() ); }
  int formula_count() const noexcept { return static_cast<int>( formulas_.size() ); }
  const std::vector<std::string>& models() const noexcept { return models_; }
  const std::vector<std::string>& formulas() const noexcept { return formulas_; }

  Mask all_models() const noexcept { return low_bits( model_count() ); }
  Mask all_formulas() const noexcept { return low_bits( formula_count() ); }

  Mask row( int m ) const { return rows_.at( m ); }
  Mask column( int a ) const { return cols_.at( a ); }
  bool sat( int m, int a ) const { return has_bit( rows_.at( m ), a ); }

  /// Models satisfying every formula in `formulas`.
  Mask mod_mask( Mask formulas ) const noexcept
  {
    Mask out = all_models();
    for ( ; formulas; formulas &= formulas - 1 )
      out &= cols_[std::countr_zero( formulas )];
    return out;
  }

  /// Formulas satisfied by every model in `models`.
  Mask th_mask( Mask models ) const noexcept
  {
    Mask out = all_formulas();
    for ( ; models; models &= models - 1 )
      out &= rows_[std::countr_zero( models )];
    return out;
  }

  Mask hull_mask( Mask models ) const noexcept { return mod_mask( th_mask( models ) ); }

  ModelSet model_set( Mask bits ) const { return ModelSet( bits, model_count() ); }
  FormulaSet formula_set( Mask bits ) const { return FormulaSet( bits, formula_count() ); }

  std::optional<int> model_index( const std::string& name ) const { return find( models_, name ); }
  std::optional<int> formula_index( const std::string& name ) const { return find( formulas_, name ); }

  std::vector<std::string> model_names( Mask m ) const { return names_of( models_, m ); }
  std::vector<std::string> formula_names( Mask m ) const { return names_of( formulas_, m ); }

  friend bool operator==( const FiniteFrame& a, const FiniteFrame& b )
  {
    return a.models_ == b.models_ && a.formulas_ == b.formulas_ && a.rows_ == b.rows_;
  }

private:
  static std::optional<int> find( const std::vector<std::string>& names, const std::string& name )
  {
    auto it = std::find( names.begin(), names.end(), name );
    if ( it == names.end() )
      return std::nullopt;
    return static_cast<int>( it - names.begin() );
  }

  static std::vector<std::string> names_of( const std::vector<std::string>& names, Mask m )
  {
    std::vector<std::string> out;
    for ( int i : indices_of( m ) )
      out.push_back( names.at( i ) );
    return out;
  }

  void check_names() const
  {
    if ( models_.size() > kMaxWidth )
      throw InputError( "models: " + std::to_string( models_.size() ) + " exceeds the cap of 62" );
    if ( formulas_.size() > kMaxWidth )
      throw InputError( "formulas: " + std::to_string( formulas_.size() ) + " exceeds the cap of 62" );
    check_distinct( models_, "models" );
    check_distinct( formulas_, "formulas" );
  }

  static void check_distinct( const std::vector<std::string>& names, const char* field )
  {
    std::unordered_set<std::string> seen;
    for ( const auto& n : names )
      if ( !seen.insert( n ).second )
        throw InputError( std::string( field ) + ": duplicate identifier \"" + n + "\"" );
  }

  void build_columns()
  {
    cols_.assign( formulas_.size(), 0 );
    for ( int m = 0; m < model_count(); ++m )
      for ( int a : indices_of( rows_[m] ) )
        cols_[a] |= bit( m );
  }

  std::vector<std::string> models_;
  std::vector<std::string> formulas_;
  std::vector<Mask> rows_;
  std::vector<Mask> cols_;
};

inline void require_models( const FiniteFrame& frame, const ModelSet& x )
{
  if ( x.width() != frame.model_count() )
    throw InputError( "model set width " + std::to_string( x.width() ) + " does not match frame with " +
                      std::to_string( frame.model_count() ) + " models" );
}

inline void require_formulas( const FiniteFrame& frame, const FormulaSet& a )
{
  if ( a.width() != frame.formula_count() )
    throw InputError( "formula set width " + std::to_string( a.width() ) + " does not match frame with " +
                      std::to_string( frame.formula_count() ) + " formulas" );
}

inline ModelSet mod_of( const FiniteFrame& frame, const FormulaSet& a )
{
  require_formulas( frame, a );
  return frame.model_set( frame.mod_mask( a.bits() ) );
}

inline FormulaSet th_of( const FiniteFrame& frame, const ModelSet& x )
{
  require_models( frame, x );
  return frame.formula_set( frame.th_mask( x.bits() ) );
}

/// Smallest definable superset of `x`.
inline ModelSet definable_hull( const FiniteFrame& frame, const ModelSet& x )
{
  require_models( frame, x );
  return frame.model_set( frame.hull_mask( x.bits() ) );
}

inline bool is_definable( const FiniteFrame& frame, const ModelSet& x )
{
  return definable_hull( frame, x ) == x;
}

/// Orders model sets by cardinality, then by bit value.
inline bool family_order( Mask a, Mask b ) noexcept
{
  int pa = popcount( a ), pb = popcount( b );
  return pa != pb ? pa < pb : a < b;
}

/*! \brief All definable sets of the frame, sorted by (cardinality, value).

  Computed as the intersection-closure of the formula extensions together
  with the full model set.
*/
inline std::vector<Mask> definable_family_masks( const FiniteFrame& frame )
{
  std::unordered_set<Mask> seen{ frame.all_models() };
  std::vector<Mask> family{ frame.all_models() };
  for ( int a = 0; a < frame.formula_count(); ++a )
  {
    const auto size = family.size();
    for ( std::size_t i = 0; i < size; ++i )
    {
      Mask d = family[i] & frame.column( a );
      if ( seen.insert( d ).second )
        family.push_back( d );
    }
  }
  std::sort( family.begin(), family.end(), family_order );
  return family;
}

inline std::vector<ModelSet> definable_family( const FiniteFrame& frame )
{
  std::vector<ModelSet> out;
  for ( Mask d : definable_family_masks( frame ) )
    out.push_back( frame.model_set( d ) );
  return out;
}

struct UnionClosure
{
  bool holds = true;
  std::optional<std::pair<ModelSet, ModelSet>> witness;
  std::uint64_t pairs_checked = 0;
};

/// Checks that the union of any two definable sets is definable.
inline UnionClosure is_union_closed( const FiniteFrame& frame )
{
  const auto family = definable_family_masks( frame );
  UnionClosure out;
  for ( std::size_t i = 0; i < family.size(); ++i )
    for ( std::size_t j = i; j < family.size(); ++j )
    {
      ++out.pairs_checked;
      Mask u = family[i] | family[j];
      if ( frame.hull_mask( u ) != u )
      {
        out.holds = false;
        out.witness = std::make_pair( frame.model_set( family[i] ), frame.model_set( family[j] ) );
        return out;
      }
    }
  return out;
}

/// Frame on `n` models in which every subset is definable.
///
/// Formula `not<i>` holds everywhere except at model `i`, so X = Mod({not<i> : i ∉ X}).
inline FiniteFrame full_definability_frame( int n )
{
  std::vector<std::string> models, formulas;
  std::vector<Mask> rows;
  for ( int i = 0; i < n; ++i )
  {
    models.push_back( std::to_string( i + 1 ) );
    formulas.push_back( "not" + std::to_string( i + 1 ) );
  }
  for ( int m = 0; m < n; ++m )
    rows.push_back( low_bits( n ) & ~bit( m ) );
  return FiniteFrame::from_rows( std::move( models ), std::move( formulas ), std::move( rows ) );
}

/// Frame on `n` numbered models and `l` formulas p1..pl, with rows read off `sat_bits`
/// (bit m*l + a is set iff model m satisfies formula a).
inline FiniteFrame numbered_frame( int n, int l, Mask sat_bits )
{
  std::vector<std::string> models, formulas;
  std::vector<Mask> rows;
  for ( int i = 0; i < n; ++i )
    models.push_back( std::to_string( i + 1 ) );
  for ( int a = 0; a < l; ++a )
    formulas.push_back( "p" + std::to_string( a + 1 ) );
  for ( int m = 0; m < n; ++m )
    rows.push_back( ( sat_bits >> ( m * l ) ) & low_bits( l ) );
  return FiniteFrame::from_rows( std::move( models ), std::move( formulas ), std::move( rows ) );
}

} // namespace choicelab
