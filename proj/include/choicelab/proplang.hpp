#pragma once

#include <random>
#include <string>
#include <vector>

#include "bridge.hpp"
#include "connectives.hpp"
#include "consequence.hpp"
#include "frame.hpp"
#include "report.hpp"

namespace choicelab
{

/*! \brief Frame over k atoms whose formulas are all Boolean functions.

  Model v is the valuation giving atom i the value of bit i of v. Formula j
  is the Boolean function whose truth table has bit v set iff it is true at
  valuation v, so formula indices double as truth tables: disjunction is
  bitwise or, negation is complement, and entailment is containment.
*/
struct PropFrame
{
  int atoms = 0;
  FiniteFrame frame;
  ConnectiveStructure connectives;

  int valuations() const noexcept { return 1 << atoms; }
  int formula_count() const noexcept { return frame.formula_count(); }
  int bottom() const noexcept { return 0; }
  int top() const noexcept { return formula_count() - 1; }
  int atom( int i ) const noexcept
  {
    int tt = 0;
    for ( int v = 0; v < valuations(); ++v )
      if ( ( v >> i ) & 1 )
        tt |= 1 << v;
    return tt;
  }
  int disj( int a, int b ) const noexcept { return a | b; }
  int neg( int a ) const noexcept { return top() & ~a; }
  int meet( int a, int b ) const noexcept { return a & b; }
  bool entails( int a, int c ) const noexcept { return ( a & ~c ) == 0; }
};

/// Name of the formula with truth table `tt`: "tt:" then one bit per valuation.
inline std::string truth_table_name( int tt, int valuations )
{
  std::string s = "tt:";
  for ( int v = 0; v < valuations; ++v )
    s += ( ( tt >> v ) & 1 ) ? '1' : '0';
  return s;
}

inline PropFrame build_prop_frame( int k )
{
  if ( k < 0 || k > 3 )
    throw InputError( "atoms: k must lie in [0, 3]" );
  if ( k == 3 )
    throw InputError( "atoms: k = 3 gives 256 formulas, above the 62-formula frame cap" );
  PropFrame pf;
  pf.atoms = k;
  const int vals = 1 << k;
  const int formulas = 1 << vals;
  std::vector<std::string> model_names, formula_names;
  for ( int v = 0; v < vals; ++v )
  {
    std::string s = "v:";
    for ( int i = 0; i < k; ++i )
      s += ( ( v >> i ) & 1 ) ? '1' : '0';
    model_names.push_back( s );
  }
  for ( int j = 0; j < formulas; ++j )
    formula_names.push_back( truth_table_name( j, vals ) );
  std::vector<Mask> rows( vals, 0 );
  for ( int v = 0; v < vals; ++v )
    for ( int j = 0; j < formulas; ++j )
      if ( ( j >> v ) & 1 )
        rows[v] |= bit( j );
  pf.frame = FiniteFrame::from_rows( std::move( model_names ), std::move( formula_names ), std::move( rows ) );
  pf.connectives.size = formulas;
  pf.connectives.disjunction.resize( static_cast<std::size_t>( formulas ) * formulas );
  pf.connectives.negation.resize( formulas );
  for ( int a = 0; a < formulas; ++a )
  {
    pf.connectives.negation[a] = ( formulas - 1 ) & ~a;
    for ( int b = 0; b < formulas; ++b )
      pf.connectives.disjunction[static_cast<std::size_t>( a ) * formulas + b] = a | b;
  }
  return pf;
}

/// {a ∨ b : a ∈ A, b ∈ B}.
inline FormulaSet vee_of_sets( const PropFrame& pf, const FormulaSet& a, const FormulaSet& b )
{
  require_formulas( pf.frame, a );
  require_formulas( pf.frame, b );
  Mask out = 0;
  for ( int x : a.indices() )
    for ( int y : b.indices() )
      out |= bit( pf.connectives.disj( x, y ) );
  return pf.frame.formula_set( out );
}

/// Checks Mod(A) ∪ Mod(B) = Mod(A ∨ B) on all A, B of size ≤ 2 plus seeded random pairs.
inline PropertyReport check_union_as_vee( const PropFrame& pf, std::uint64_t seed = 0x5eedULL, int random_pairs = 200 )
{
  const auto& fr = pf.frame;
  std::vector<Mask> small;
  for ( Mask a = 0; a <= fr.all_formulas(); ++a )
    if ( popcount( a ) <= 2 )
      small.push_back( a );
  PropertyReport r{ "union-as-disjunction" };
  auto check = [&]( Mask a, Mask b ) {
    ++r.checked;
    Mask vee = vee_of_sets( pf, fr.formula_set( a ), fr.formula_set( b ) ).bits();
    if ( ( fr.mod_mask( a ) | fr.mod_mask( b ) ) == fr.mod_mask( vee ) )
      return true;
    r.holds = false;
    r.witness = { Binding{ "A", Domain::formulas, a, fr.formula_names( a ) },
                  Binding{ "B", Domain::formulas, b, fr.formula_names( b ) } };
    return false;
  };
  for ( Mask a : small )
    for ( Mask b : small )
      if ( !check( a, b ) )
        return r;
  std::mt19937_64 rng( seed );
  for ( int i = 0; i < random_pairs; ++i )
  {
    Mask a = rng() & fr.all_formulas();
    Mask b = rng() & fr.all_formulas();
    if ( !check( a, b ) )
      return r;
  }
  return r;
}

/// m ⊨ a ∨ b iff m ⊨ a or m ⊨ b, for every model and formula pair.
inline PropertyReport check_disjunction_semantics( const FiniteFrame& frame, const ConnectiveStructure& cs )
{
  PropertyReport r{ "disjunction-semantics" };
  for ( int m = 0; m < frame.model_count(); ++m )
    for ( int a = 0; a < frame.formula_count(); ++a )
      for ( int b = 0; b < frame.formula_count(); ++b )
      {
        ++r.checked;
        if ( frame.sat( m, cs.disj( a, b ) ) != ( frame.sat( m, a ) || frame.sat( m, b ) ) )
        {
          r.holds = false;
          r.witness = { Binding{ "m", Domain::models, bit( m ), { frame.models()[m] } },
                        Binding{ "a", Domain::formula, bit( a ), { frame.formulas()[a] } },
                        Binding{ "b", Domain::formula, bit( b ), { frame.formulas()[b] } } };
          return r;
        }
      }
  return r;
}

/// m ⊨ ¬a iff not m ⊨ a.
inline PropertyReport check_negation_semantics( const FiniteFrame& frame, const ConnectiveStructure& cs )
{
  PropertyReport r{ "negation-semantics" };
  for ( int m = 0; m < frame.model_count(); ++m )
    for ( int a = 0; a < frame.formula_count(); ++a )
    {
      ++r.checked;
      if ( frame.sat( m, cs.neg( a ) ) == frame.sat( m, a ) )
      {
        r.holds = false;
        r.witness = { Binding{ "m", Domain::models, bit( m ), { frame.models()[m] } },
                      Binding{ "a", Domain::formula, bit( a ), { frame.formulas()[a] } } };
        return r;
      }
    }
  return r;
}

inline void require_language( const PropFrame& pf, const ConsequenceOperation& c )
{
  if ( c.formulas() != pf.frame.formulas() )
    throw InputError( "operation formulas do not match the truth-table language over " + std::to_string( pf.atoms ) +
                      " atoms" );
}

/*! \brief Finitary form: if a ∨ b |~ c then a |~ a', b |~ b' and a' ∧ b' ⊨ c for some a', b'.

  |~ is read as membership in C of a singleton; ∧ is truth-table meet.
  Triples are scanned with a outermost, then b, then c.
*/
inline PropertyReport check_satoh_finitary( const PropFrame& pf, const ConsequenceOperation& c )
{
  require_language( pf, c );
  const int n = pf.formula_count();
  std::vector<Mask> single( n );
  for ( int x = 0; x < n; ++x )
    single[x] = c.closure_mask( bit( x ) );
  PropertyReport r{ "satoh-finitary" };
  for ( int a = 0; a < n; ++a )
    for ( int b = 0; b < n; ++b )
    {
      const Mask conclusions = single[pf.disj( a, b )];
      for ( int cc = 0; cc < n; ++cc )
      {
        ++r.checked;
        if ( !has_bit( conclusions, cc ) )
          continue;
        bool found = false;
        for ( int a2 : indices_of( single[a] ) )
        {
          for ( int b2 : indices_of( single[b] ) )
            if ( pf.entails( pf.meet( a2, b2 ), cc ) )
            {
              found = true;
              break;
            }
          if ( found )
            break;
        }
        if ( !found )
        {
          r.holds = false;
          r.witness = { Binding{ "a", Domain::formula, bit( a ), { c.formulas()[a] } },
                        Binding{ "b", Domain::formula, bit( b ), { c.formulas()[b] } },
                        Binding{ "c", Domain::formula, bit( cc ), { c.formulas()[cc] } } };
          return r;
        }
      }
    }
  return r;
}

/// Theories T that are ∨-prime and contain exactly one of a, ¬a for every a.
inline std::vector<Mask> prime_complete_theories( std::span<const Mask> table, const ConnectiveStructure& cs )
{
  std::vector<Mask> out;
  for ( Mask t : theories_of( table ) )
  {
    bool ok = true;
    for ( int a = 0; a < cs.size && ok; ++a )
    {
      ok = has_bit( t, a ) != has_bit( t, cs.neg( a ) );
      for ( int b = 0; b < cs.size && ok; ++b )
        if ( has_bit( t, cs.disj( a, b ) ) && !has_bit( t, a ) && !has_bit( t, b ) )
          ok = false;
    }
    if ( ok )
      out.push_back( t );
  }
  return out;
}

/*! \brief Best-effort check of the connective-equipped equivalence on a truth-table language.

  Checks the hypothesis list (weak compactness, the negation and disjunction
  rules, the structural properties) together with property (E). If they all
  hold, builds the canonical construction on the ∨-prime, negation-complete
  theories and checks both connective semantics and the full list of
  choice-side conclusions and the representation there. A failing conclusion
  is a recorded outcome of this particular construction, not a refutation.
*/
inline TheoremReport search_theorem3_completeness( const ConsequenceOperation& c, const PropFrame& pf )
{
  require_language( pf, c );
  if ( pf.atoms > 2 )
    throw InputError( "atoms: the completeness search supports k <= 2" );
  TheoremReport rep;
  rep.theorem = "3";
  rep.note = "best-effort: canonical models restricted to prime, negation-complete theories";
  ConsequenceEvaluator ev( c, &pf.frame, &pf.connectives );
  for ( auto p : { ConsequenceProperty::weak_compactness, ConsequenceProperty::neg_left_intro,
                   ConsequenceProperty::neg_left_elim, ConsequenceProperty::or_left_intro,
                   ConsequenceProperty::or_right_intro } )
    rep.hypotheses.push_back( ev.evaluate( p ) );
  for ( auto p : kStructuralProperties )
    rep.hypotheses.push_back( ev.evaluate( p ) );
  rep.hypotheses.push_back( ev.evaluate( ConsequenceProperty::property_e ) );

  std::vector<std::string> names = { "disjunction-semantics", "negation-semantics" };
  names.insert( names.end(), detail::kCanonicalConclusions.begin(), detail::kCanonicalConclusions.end() );
  if ( auto failed = detail::first_failure( rep.hypotheses ); !failed.empty() )
  {
    detail::skip_all( rep.conclusions, names, "hypothesis " + failed + " fails" );
    rep.finalize();
    return rep;
  }
  const auto theories = prime_complete_theories( ev.table(), pf.connectives );
  if ( theories.size() > static_cast<std::size_t>( kMaxTableWidth ) )
  {
    detail::skip_all( rep.conclusions, names, "restricted canonical frame exceeds 20 models" );
    rep.finalize();
    return rep;
  }
  const auto cf = theory_frame( c.formulas(), theories );
  const auto f = canonical_choice_from_table( ev.table(), cf );
  rep.conclusions.push_back( check_disjunction_semantics( cf, pf.connectives ) );
  rep.conclusions.push_back( check_negation_semantics( cf, pf.connectives ) );
  for ( auto& r : detail::canonical_conclusions( ev, cf, f ) )
    rep.conclusions.push_back( std::move( r ) );
  rep.finalize();
  return rep;
}

} // namespace choicelab
