#include <gtest/gtest.h>

#include <random>

#include "choicelab/bridge.hpp"
#include "choicelab/orders.hpp"
#include "oracle.hpp"

using namespace choicelab;

namespace
{

FiniteFrame fix3()
{
  return FiniteFrame( { "m1", "m2", "m3" }, { "p", "q" }, { { true, true }, { true, false }, { false, true } } );
}

ConsequenceOperation explicit_of( const std::vector<Mask>& table, int width )
{
  std::vector<std::string> names;
  for ( int i = 0; i < width; ++i )
    names.push_back( "p" + std::to_string( i + 1 ) );
  return ConsequenceOperation::explicit_table( names, table );
}

bool hypotheses_hold( const TheoremReport& rep )
{
  for ( const auto& r : rep.hypotheses )
    if ( !r.holds )
      return false;
  return true;
}

std::string first_failing( const TheoremReport& rep )
{
  for ( const auto* group : { &rep.hypotheses, &rep.conclusions, &rep.identities } )
    for ( const auto& r : *group )
      if ( !r.skipped && !r.holds )
        return r.property;
  return {};
}

} // namespace

TEST( Bridge, CanonicalFrameOfFix3 )
{
  const auto fr = fix3();
  const auto c = derive_consequence( fr, make_preferential( fr, { { "m2", "m1" } }, true ) );
  const auto cf = canonical_frame( c );
  EXPECT_EQ( cf.model_count(), 4 );
  EXPECT_EQ( cf.models(), ( std::vector<std::string>{ "{}", "{p}", "{q}", "{p,q}" } ) );
  const auto f = canonical_choice( c, cf );
  // C is the identity, so every theory survives in every set containing it
  for ( Mask x = 0; x < 16; ++x )
    EXPECT_EQ( f.apply_mask( x ), x );
}

TEST( Bridge, CanonicalChoiceMatchesOracle )
{
  std::mt19937_64 rng( 3 );
  for ( int iter = 0; iter < 300; ++iter )
  {
    const int width = 1 + static_cast<int>( rng() % 3 );
    const auto table = oracle::random_consequence_table( rng, width, true );
    const auto c = explicit_of( table, width );
    const auto cf = canonical_frame( c );
    const oracle::Matrix mx( cf );
    const auto f = canonical_choice( c, cf );
    for ( int m = 0; m < cf.model_count(); ++m )
      ASSERT_EQ( table[cf.th_mask( bit( m ) )], cf.th_mask( bit( m ) ) );
    for ( Mask x = 0; x < ( Mask{ 1 } << cf.model_count() ); ++x )
      ASSERT_EQ( f.apply_mask( x ), x & mx.mod( table[mx.th( x )] ) );
  }
}

TEST( Bridge, Theorem1OnFix3DerivedOperation )
{
  const auto fr = fix3();
  const auto rep = verify_theorem1( derive_consequence( fr, make_preferential( fr, { { "m2", "m1" } }, true ) ) );
  EXPECT_TRUE( rep.overall ) << first_failing( rep );
  EXPECT_EQ( rep.hypotheses.size(), 6u );
  ASSERT_NE( rep.find( "representation" ), nullptr );
  EXPECT_EQ( rep.find( "representation" )->checked, 4u );
}

TEST( Bridge, Theorem1OnSingleFormulaIdentity )
{
  const auto c = ConsequenceOperation::explicit_table( { "p" }, { 0b0, 0b1 } );
  EXPECT_EQ( canonical_frame( c ).model_count(), 2 );
  const auto rep = verify_theorem1( c );
  EXPECT_TRUE( rep.overall ) << first_failing( rep );
}

TEST( Bridge, Theorem1OnImplicationOperation )
{
  // C({p}) = {p,q}, identity elsewhere: classical consequence where p entails q
  const auto c = explicit_of( { 0b00, 0b11, 0b10, 0b11 }, 2 );
  const auto rep = verify_theorem1( c );
  EXPECT_TRUE( rep.overall ) << first_failing( rep );
  EXPECT_EQ( canonical_frame( c ).models(), ( std::vector<std::string>{ "{}", "{p2}", "{p1,p2}" } ) );
}

TEST( Bridge, Theorem1SkipsConclusionsWhenHypothesisFails )
{
  const auto c = explicit_of( { 0b00, 0b01, 0b10, 0b01 }, 2 );
  const auto rep = verify_theorem1( c );
  EXPECT_FALSE( rep.overall );
  const auto table = c.materialize();
  for ( const auto& h : rep.hypotheses )
  {
    const auto p = parse_consequence_property( h.property );
    ASSERT_TRUE( p );
    const auto o = oracle::consequence( table, 2, *p );
    EXPECT_EQ( h.holds, o.holds ) << h.property;
  }
  EXPECT_EQ( first_failing( rep ), "inclusion" );
  for ( const auto* group : { &rep.conclusions, &rep.identities } )
    for ( const auto& r : *group )
    {
      EXPECT_TRUE( r.skipped );
      EXPECT_EQ( r.reason, "hypothesis inclusion fails" );
    }
}

TEST( Bridge, Theorem1OnExpansionFailingChoice )
{
  // f(123) = {3} but f(12) = {1,2}: the derived C violates (E)
  const auto fr = full_definability_frame( 3 );
  const auto f = ChoiceFunction::table( 3, { 0, 1, 2, 3, 4, 5, 6, 5 } );
  const auto c = derive_consequence( fr, f );
  const auto rep = verify_theorem1( c );
  EXPECT_FALSE( rep.overall );
  const auto* e = rep.find( "prop-e" );
  ASSERT_NE( e, nullptr );
  EXPECT_FALSE( e->holds );
  const auto o = oracle::consequence( c.materialize(), 3, ConsequenceProperty::property_e );
  EXPECT_EQ( e->checked, o.checked );
  EXPECT_EQ( oracle::masks_of( *e ), o.witness );
}

// Recorded finding: our forms of conditional and threshold monotonicity admit this
// operation, yet its canonical choice is not coherent. C({}) = {p3} while
// C({p2}) = {p1,p2}, which is not inside the theory {p2,p3}.
TEST( Bridge, Theorem1CanonicalChoiceNotCoherentOverThreeFormulas )
{
  const auto c = explicit_of( { 0b100, 0b101, 0b011, 0b011, 0b100, 0b101, 0b110, 0b111 }, 3 );
  const auto rep = verify_theorem1( c );
  EXPECT_TRUE( hypotheses_hold( rep ) );
  for ( const auto& h : rep.hypotheses )
  {
    const auto p = parse_consequence_property( h.property );
    ASSERT_TRUE( p );
    EXPECT_TRUE( oracle::consequence( c.materialize(), 3, *p ).holds ) << h.property;
  }
  const auto fr = canonical_frame( c );
  EXPECT_EQ( fr.models(), ( std::vector<std::string>{ "{p1,p2}", "{p3}", "{p1,p3}", "{p2,p3}", "{p1,p2,p3}" } ) );
  const auto f = canonical_choice( c, fr );
  const auto o = oracle::choice( f.materialize(), 5, ChoiceProperty::coherence, nullptr );
  EXPECT_FALSE( o.holds );
  const auto* coh = rep.find( "coherence" );
  ASSERT_NE( coh, nullptr );
  EXPECT_FALSE( coh->holds );
  EXPECT_FALSE( rep.overall );
  // {p1,p2} and {p2,p3} inside {p1,p2}, {p3}, {p2,p3}
  ASSERT_EQ( coh->witness.size(), 2u );
  EXPECT_EQ( coh->witness[0].bits, 0b01001u );
  EXPECT_EQ( coh->witness[1].bits, 0b01011u );
}

TEST( Bridge, Theorem2Fix3PreferentialFailsDefinability )
{
  const auto fr = fix3();
  const auto rep = verify_theorem2( fr, make_preferential( fr, { { "m2", "m1" } }, true ) );
  EXPECT_FALSE( rep.overall );
  const auto* dp = rep.find( "dp" );
  ASSERT_NE( dp, nullptr );
  EXPECT_FALSE( dp->holds );
  ASSERT_EQ( dp->witness.size(), 1u );
  EXPECT_EQ( dp->witness[0].bits, 0b011u );
  EXPECT_EQ( first_failing( rep ), "dp" );
  for ( const auto& r : rep.conclusions )
    EXPECT_TRUE( r.skipped );
}

TEST( Bridge, Theorem2Fix3EmptyRelationHolds )
{
  const auto fr = fix3();
  const auto rep = verify_theorem2( fr, make_preferential( fr, {}, true ) );
  EXPECT_TRUE( rep.overall ) << first_failing( rep );
}

TEST( Bridge, RelationsMeetingTheorem2HypothesesOnFix3 )
{
  // {m2,m3} is not definable, so an edge between m2 and m3 escapes dp
  const auto fr = fix3();
  std::vector<std::vector<std::pair<int, int>>> meeting;
  for ( const auto& rel : irreflexive_relations( 3 ) )
  {
    const auto edges = edges_of( rel );
    const auto rep = verify_theorem2( fr, ChoiceFunction::preferential( 3, edges ) );
    if ( hypotheses_hold( rep ) )
    {
      meeting.push_back( edges );
      EXPECT_TRUE( rep.overall );
    }
  }
  const std::vector<std::vector<std::pair<int, int>>> expected = { {}, { { 1, 2 } }, { { 2, 1 } } };
  EXPECT_EQ( meeting, expected );
}

TEST( Bridge, Theorem2ReportsExpansionFailure )
{
  const auto fr = full_definability_frame( 3 );
  const auto rep = verify_theorem2( fr, ChoiceFunction::table( 3, { 0, 1, 2, 3, 4, 5, 6, 5 } ) );
  EXPECT_FALSE( rep.overall );
  EXPECT_EQ( first_failing( rep ), "expansion" );
}

TEST( Bridge, ReadingFallbackAgreesUnderInclusion )
{
  std::mt19937_64 rng( 11 );
  for ( int iter = 0; iter < 200; ++iter )
  {
    const int width = 1 + static_cast<int>( rng() % 4 );
    const auto table = oracle::random_consequence_table( rng, width, true );
    EXPECT_EQ( theories_of( table ), theories_of( table, TheoryReading::closed_under ) );
  }
  // without inclusion C(T) ⊆ T admits more sets
  const std::vector<Mask> shrink = { 0, 0 };
  EXPECT_EQ( theories_of( shrink ), std::vector<Mask>{ 0 } );
  EXPECT_EQ( theories_of( shrink, TheoryReading::closed_under ), ( std::vector<Mask>{ 0, 1 } ) );
}

TEST( Bridge, CanonicalChoiceRejectsForeignFrame )
{
  const auto c = explicit_of( { 0, 1 }, 1 );
  EXPECT_THROW( canonical_choice( c, fix3() ), InputError );
}

// Completeness direction on every operation over two formulas and a sample over three.
TEST( BridgeProperty, Theorem1ConclusionsFollowFromHypotheses )
{
  int meeting = 0;
  for ( Mask code = 0; code < 256; ++code )
  {
    std::vector<Mask> table( 4 );
    for ( int a = 0; a < 4; ++a )
      table[a] = ( code >> ( 2 * a ) ) & 3;
    const auto rep = verify_theorem1( explicit_of( table, 2 ) );
    if ( hypotheses_hold( rep ) )
    {
      ++meeting;
      ASSERT_TRUE( rep.overall ) << code << " " << first_failing( rep );
    }
  }
  EXPECT_GT( meeting, 0 );
  std::mt19937_64 rng( 12 );
  for ( int iter = 0; iter < 500; ++iter )
  {
    const auto fr = oracle::random_frame( rng, 4, 3 );
    if ( fr.formula_count() == 0 )
      continue;
    const auto rel = strict_partial_orders( fr.model_count() );
    const auto f = ChoiceFunction::preferential( fr.model_count(), edges_of( rel[rng() % rel.size()] ) );
    const auto rep = verify_theorem1( derive_consequence( fr, f ) );
    if ( hypotheses_hold( rep ) )
    {
      ASSERT_TRUE( rep.overall ) << first_failing( rep );
    }
  }
}

// Soundness direction on random frames with strict partial orders and random tables.
TEST( BridgeProperty, Theorem2ConclusionsFollowFromHypotheses )
{
  std::mt19937_64 rng( 13 );
  int meeting = 0;
  for ( int iter = 0; iter < 1500; ++iter )
  {
    const auto fr = oracle::random_frame( rng, 4, 4 );
    ChoiceFunction f = ChoiceFunction::identity( fr.model_count() );
    if ( iter % 2 )
    {
      const auto rel = strict_partial_orders( fr.model_count() );
      f = ChoiceFunction::preferential( fr.model_count(), edges_of( rel[rng() % rel.size()] ) );
    }
    else
      f = ChoiceFunction::table( fr.model_count(), oracle::random_choice_table( rng, fr.model_count(), true ) );
    const auto rep = verify_theorem2( fr, f );
    if ( hypotheses_hold( rep ) )
    {
      ++meeting;
      ASSERT_TRUE( rep.overall ) << first_failing( rep );
    }
  }
  EXPECT_GT( meeting, 100 );
}
