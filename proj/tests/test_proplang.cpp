#include <gtest/gtest.h>

#include <random>

#include "choicelab/orders.hpp"
#include "choicelab/proplang.hpp"
#include "oracle.hpp"

using namespace choicelab;

namespace
{

// Truth value of formula tt at valuation v, read straight from the truth table.
bool holds_at( int tt, int v ) { return ( tt >> v ) & 1; }

ConsequenceOperation derived_pref( const PropFrame& pf, const Relation& rel )
{
  return derive_consequence( pf.frame, ChoiceFunction::preferential( pf.valuations(), edges_of( rel ) ) );
}

} // namespace

TEST( PropFrame, SizesAndNames )
{
  const auto p0 = build_prop_frame( 0 );
  EXPECT_EQ( p0.frame.model_count(), 1 );
  EXPECT_EQ( p0.frame.formulas(), ( std::vector<std::string>{ "tt:0", "tt:1" } ) );
  EXPECT_EQ( p0.frame.models(), std::vector<std::string>{ "v:" } );
  const auto p1 = build_prop_frame( 1 );
  EXPECT_EQ( p1.frame.models(), ( std::vector<std::string>{ "v:0", "v:1" } ) );
  EXPECT_EQ( p1.frame.formulas(), ( std::vector<std::string>{ "tt:00", "tt:10", "tt:01", "tt:11" } ) );
  const auto p2 = build_prop_frame( 2 );
  EXPECT_EQ( p2.frame.model_count(), 4 );
  EXPECT_EQ( p2.frame.formula_count(), 16 );
  EXPECT_EQ( p2.frame.models()[1], "v:10" );
  EXPECT_EQ( p2.atom( 0 ), 0b1010 );
  EXPECT_EQ( p2.atom( 1 ), 0b1100 );
  EXPECT_EQ( p2.neg( p2.atom( 0 ) ), 0b0101 );
  EXPECT_THROW( build_prop_frame( 3 ), InputError );
  EXPECT_THROW( build_prop_frame( -1 ), InputError );
}

TEST( PropFrame, SatisfactionIsTruthTableLookup )
{
  for ( int k = 0; k <= 2; ++k )
  {
    const auto pf = build_prop_frame( k );
    for ( int v = 0; v < pf.valuations(); ++v )
      for ( int tt = 0; tt < pf.formula_count(); ++tt )
        ASSERT_EQ( pf.frame.sat( v, tt ), holds_at( tt, v ) );
  }
}

TEST( PropFrame, ConnectiveSemanticsHold )
{
  for ( int k = 0; k <= 2; ++k )
  {
    const auto pf = build_prop_frame( k );
    const auto d = check_disjunction_semantics( pf.frame, pf.connectives );
    EXPECT_TRUE( d.holds );
    EXPECT_EQ( d.checked, static_cast<std::uint64_t>( pf.valuations() ) * pf.formula_count() * pf.formula_count() );
    EXPECT_TRUE( check_negation_semantics( pf.frame, pf.connectives ).holds );
    for ( int a = 0; a < pf.formula_count(); ++a )
      for ( int b = 0; b < pf.formula_count(); ++b )
        for ( int v = 0; v < pf.valuations(); ++v )
          ASSERT_EQ( holds_at( pf.connectives.disj( a, b ), v ), holds_at( a, v ) || holds_at( b, v ) );
  }
}

TEST( PropFrame, BrokenConnectivesAreReported )
{
  auto pf = build_prop_frame( 1 );
  pf.connectives.negation[1] = 1;
  const auto n = check_negation_semantics( pf.frame, pf.connectives );
  ASSERT_FALSE( n.holds );
  EXPECT_EQ( n.witness[1].names, std::vector<std::string>{ "tt:10" } );
  pf = build_prop_frame( 1 );
  pf.connectives.disjunction[1 * 4 + 2] = 0;
  const auto d = check_disjunction_semantics( pf.frame, pf.connectives );
  ASSERT_FALSE( d.holds );
  EXPECT_EQ( d.witness[1].bits, bit( 1 ) );
  EXPECT_EQ( d.witness[2].bits, bit( 2 ) );
}

TEST( PropFrame, UnionAsDisjunctionExhaustiveAtOneAtom )
{
  const auto pf = build_prop_frame( 1 );
  const oracle::Matrix mx( pf.frame );
  for ( Mask a = 0; a < 16; ++a )
    for ( Mask b = 0; b < 16; ++b )
    {
      Mask vee = 0;
      for ( int x = 0; x < 4; ++x )
        for ( int y = 0; y < 4; ++y )
          if ( has_bit( a, x ) && has_bit( b, y ) )
            vee |= bit( x | y );
      ASSERT_EQ( vee_of_sets( pf, pf.frame.formula_set( a ), pf.frame.formula_set( b ) ).bits(), vee );
      ASSERT_EQ( mx.mod( a ) | mx.mod( b ), mx.mod( vee ) );
    }
  for ( int k = 0; k <= 2; ++k )
    EXPECT_TRUE( check_union_as_vee( build_prop_frame( k ) ).holds );
  const auto r = check_union_as_vee( build_prop_frame( 2 ), 1, 50 );
  EXPECT_EQ( r.checked, 137u * 137u + 50u );
}

TEST( PropFrame, ClassicalConsequencePassesEverything )
{
  for ( int k = 0; k <= 2; ++k )
  {
    const auto pf = build_prop_frame( k );
    const auto c = derive_consequence( pf.frame, ChoiceFunction::identity( pf.valuations() ) );
    const ConsequenceEvaluator ev( c, &pf.frame, &pf.connectives );
    for ( auto p : kAllConsequenceProperties )
      EXPECT_TRUE( ev.evaluate( p ).holds ) << k << " " << name_of( p );
    EXPECT_TRUE( check_satoh_finitary( pf, c ).holds );
  }
}

TEST( PropFrame, SatohFailsWhenExpansionFails )
{
  // identity except f({0,1,2}) = {1}: f({0,1}) and f({0,2}) share 0, which their union drops
  const auto pf = build_prop_frame( 2 );
  std::vector<Mask> table( 16 );
  for ( Mask x = 0; x < 16; ++x )
    table[x] = x;
  table[0b0111] = 0b0010;
  const auto c = derive_consequence( pf.frame, ChoiceFunction::table( 4, table ) );
  const auto r = check_satoh_finitary( pf, c );
  ASSERT_FALSE( r.holds );
  const int n = pf.formula_count();
  std::vector<Mask> single( n );
  for ( int x = 0; x < n; ++x )
    single[x] = c.closure_mask( bit( x ) );
  std::uint64_t checked = 0;
  std::vector<Mask> witness;
  for ( int a = 0; a < n && witness.empty(); ++a )
    for ( int b = 0; b < n && witness.empty(); ++b )
      for ( int cc = 0; cc < n && witness.empty(); ++cc )
      {
        ++checked;
        if ( !has_bit( single[a | b], cc ) )
          continue;
        bool found = false;
        for ( int a2 = 0; a2 < n; ++a2 )
          for ( int b2 = 0; b2 < n; ++b2 )
            found = found || ( has_bit( single[a], a2 ) && has_bit( single[b], b2 ) && ( ( a2 & b2 ) & ~cc ) == 0 );
        if ( !found )
          witness = { bit( a ), bit( b ), bit( cc ) };
      }
  EXPECT_EQ( r.checked, checked );
  EXPECT_EQ( oracle::masks_of( r ), witness );
  EXPECT_FALSE( ChoiceEvaluator( pf.frame, ChoiceFunction::table( 4, table ) ).evaluate( ChoiceProperty::expansion ).holds );
}

TEST( PropFrame, SatohRejectsForeignLanguage )
{
  const auto c = ConsequenceOperation::explicit_table( { "p" }, { 0, 1 } );
  EXPECT_THROW( check_satoh_finitary( build_prop_frame( 0 ), c ), InputError );
}

TEST( PropFrame, PreferentialOperationsAtOneAtom )
{
  const auto pf = build_prop_frame( 1 );
  for ( const auto& rel : strict_partial_orders( 2 ) )
  {
    const auto c = derived_pref( pf, rel );
    const auto table = c.materialize();
    const ConsequenceEvaluator ev( c, &pf.frame, &pf.connectives );
    for ( auto p : kAllConsequenceProperties )
    {
      const auto r = ev.evaluate( p );
      EXPECT_TRUE( r.holds ) << name_of( p );
      if ( p != ConsequenceProperty::distributivity )
      {
        const auto o = oracle::consequence( table, 4, p, &pf.connectives );
        EXPECT_EQ( r.checked, o.checked ) << name_of( p );
      }
    }
    EXPECT_TRUE( check_satoh_finitary( pf, c ).holds );
  }
}

TEST( PropFrame, PreferentialOperationsAtTwoAtomsSample )
{
  const auto pf = build_prop_frame( 2 );
  const auto orders = strict_partial_orders( 4 );
  ASSERT_EQ( orders.size(), 219u );
  for ( std::size_t i = 0; i < orders.size(); i += 23 )
  {
    const auto c = derived_pref( pf, orders[i] );
    const ConsequenceEvaluator ev( c, &pf.frame, &pf.connectives );
    for ( auto p : { ConsequenceProperty::or_left_intro, ConsequenceProperty::or_right_intro,
                     ConsequenceProperty::neg_left_intro, ConsequenceProperty::neg_left_elim,
                     ConsequenceProperty::weak_compactness, ConsequenceProperty::property_e } )
      EXPECT_TRUE( ev.evaluate( p ).holds ) << i << " " << name_of( p );
    EXPECT_TRUE( check_satoh_finitary( pf, c ).holds ) << i;
  }
}

TEST( PropFrame, NegationIntroHoldsForAnyContractingChoice )
{
  std::mt19937_64 rng( 5 );
  const auto pf = build_prop_frame( 1 );
  for ( int iter = 0; iter < 200; ++iter )
  {
    const auto c = derive_consequence( pf.frame, ChoiceFunction::table( 2, oracle::random_choice_table( rng, 2, true ) ) );
    const auto table = c.materialize();
    const ConsequenceEvaluator ev( c, &pf.frame, &pf.connectives );
    ASSERT_TRUE( ev.evaluate( ConsequenceProperty::neg_left_intro ).holds );
    for ( auto p : { ConsequenceProperty::or_left_intro, ConsequenceProperty::or_right_intro,
                     ConsequenceProperty::neg_left_elim } )
    {
      const auto r = ev.evaluate( p );
      const auto o = oracle::consequence( table, 4, p, &pf.connectives );
      ASSERT_EQ( r.holds, o.holds );
      ASSERT_EQ( r.checked, o.checked );
      ASSERT_EQ( oracle::masks_of( r ), o.witness );
    }
  }
}

TEST( PropFrame, PrimeCompleteTheoriesOfClassicalConsequence )
{
  // one theory per valuation: the formulas true there
  for ( int k = 0; k <= 2; ++k )
  {
    const auto pf = build_prop_frame( k );
    const auto c = derive_consequence( pf.frame, ChoiceFunction::identity( pf.valuations() ) );
    const auto theories = prime_complete_theories( c.materialize(), pf.connectives );
    ASSERT_EQ( theories.size(), static_cast<std::size_t>( pf.valuations() ) );
    for ( int v = 0; v < pf.valuations(); ++v )
      EXPECT_NE( std::find( theories.begin(), theories.end(), pf.frame.th_mask( bit( v ) ) ), theories.end() );
  }
}

TEST( PropFrame, Theorem3SearchOnPreferentialOperation )
{
  const auto pf = build_prop_frame( 1 );
  const auto c = derived_pref( pf, { bit( 1 ), 0 } ); // v:0 beats v:1
  const auto rep = search_theorem3_completeness( c, pf );
  EXPECT_EQ( rep.hypotheses.size(), 11u );
  for ( const auto& h : rep.hypotheses )
    EXPECT_TRUE( h.holds ) << h.property;
  EXPECT_FALSE( rep.note.empty() );
  EXPECT_TRUE( rep.overall );
}

TEST( PropFrame, Theorem3SearchSkipsOnFailedHypothesis )
{
  const auto pf = build_prop_frame( 1 );
  const auto c = derive_consequence( pf.frame, ChoiceFunction::table( 2, { 0, 1, 0, 2 } ) );
  const auto rep = search_theorem3_completeness( c, pf );
  EXPECT_FALSE( rep.overall );
  for ( const auto& r : rep.conclusions )
    EXPECT_TRUE( r.skipped );
}
