#include <gtest/gtest.h>

#include <random>

#include "choicelab/frame.hpp"
#include "oracle.hpp"

using namespace choicelab;

namespace
{

FiniteFrame fix3()
{
  return FiniteFrame( { "m1", "m2", "m3" }, { "p", "q" }, { { true, true }, { true, false }, { false, true } } );
}

ModelSet models( const FiniteFrame& fr, std::initializer_list<int> idx )
{
  Mask m = 0;
  for ( int i : idx )
    m |= bit( i );
  return fr.model_set( m );
}

FormulaSet formulas( const FiniteFrame& fr, std::initializer_list<int> idx )
{
  Mask m = 0;
  for ( int i : idx )
    m |= bit( i );
  return fr.formula_set( m );
}

} // namespace

TEST( Frame, Fix3ModMatchesOracle )
{
  const auto fr = fix3();
  const oracle::Matrix mx( fr );
  EXPECT_EQ( mod_of( fr, formulas( fr, { 0 } ) ), models( fr, { 0, 1 } ) );
  EXPECT_EQ( mod_of( fr, formulas( fr, {} ) ), models( fr, { 0, 1, 2 } ) );
  EXPECT_EQ( mod_of( fr, formulas( fr, { 0, 1 } ) ), models( fr, { 0 } ) );
  for ( Mask a = 0; a < 4; ++a )
    EXPECT_EQ( fr.mod_mask( a ), mx.mod( a ) );
}

TEST( Frame, Fix3ThMatchesOracle )
{
  const auto fr = fix3();
  const oracle::Matrix mx( fr );
  EXPECT_EQ( th_of( fr, models( fr, { 1 } ) ), formulas( fr, { 0 } ) );
  EXPECT_EQ( th_of( fr, models( fr, {} ) ), formulas( fr, { 0, 1 } ) );
  EXPECT_EQ( th_of( fr, models( fr, { 1, 2 } ) ), formulas( fr, {} ) );
  for ( Mask x = 0; x < 8; ++x )
    EXPECT_EQ( fr.th_mask( x ), mx.th( x ) );
}

TEST( Frame, Fix3Hull )
{
  const auto fr = fix3();
  EXPECT_EQ( definable_hull( fr, models( fr, { 1 } ) ), models( fr, { 0, 1 } ) );
  EXPECT_EQ( definable_hull( fr, models( fr, { 0, 1 } ) ), models( fr, { 0, 1 } ) );
  EXPECT_EQ( definable_hull( fr, models( fr, { 1, 2 } ) ), models( fr, { 0, 1, 2 } ) );
}

TEST( Frame, Fix3Definable )
{
  const auto fr = fix3();
  EXPECT_TRUE( is_definable( fr, models( fr, { 0, 1 } ) ) );
  EXPECT_TRUE( is_definable( fr, models( fr, { 0, 1, 2 } ) ) );
  EXPECT_FALSE( is_definable( fr, models( fr, {} ) ) );
}

TEST( Frame, Fix3Family )
{
  const auto fr = fix3();
  const std::vector<Mask> expected = { 0b001, 0b011, 0b101, 0b111 };
  EXPECT_EQ( definable_family_masks( fr ), expected );
  EXPECT_EQ( definable_family_masks( fr ), oracle::Matrix( fr ).definables() );
  const auto uc = is_union_closed( fr );
  EXPECT_TRUE( uc.holds );
  EXPECT_FALSE( uc.witness.has_value() );
  EXPECT_EQ( uc.pairs_checked, 10u );
}

TEST( Frame, FamilyWithoutFormulasIsFullSet )
{
  const auto fr = numbered_frame( 3, 0, 0 );
  EXPECT_EQ( definable_family_masks( fr ), std::vector<Mask>{ 0b111 } );
}

TEST( Frame, FamilyContainsEmptySetForContradictoryColumns )
{
  // model 1 satisfies only p1, model 2 only p2
  const auto fr = FiniteFrame::from_rows( { "1", "2" }, { "p1", "p2" }, { 0b01, 0b10 } );
  const auto fam = definable_family_masks( fr );
  EXPECT_EQ( fam.front(), 0u );
}

TEST( Frame, OneFormulaIsUnionClosed )
{
  for ( Mask col = 0; col < 16; ++col )
  {
    const auto fr = numbered_frame( 4, 1, col );
    EXPECT_TRUE( is_union_closed( fr ).holds );
  }
}

TEST( Frame, UnionClosureFailureReportsFirstPair )
{
  // extensions {1} and {2}; their union {1,2} is not definable
  const auto fr = FiniteFrame::from_rows( { "1", "2", "3" }, { "a", "b" }, { 0b01, 0b10, 0b00 } );
  const auto uc = is_union_closed( fr );
  ASSERT_FALSE( uc.holds );
  ASSERT_TRUE( uc.witness );
  EXPECT_EQ( uc.witness->first.bits(), 0b001u );
  EXPECT_EQ( uc.witness->second.bits(), 0b010u );
  EXPECT_FALSE( oracle::Matrix( fr ).definable( 0b011 ) );
}

TEST( Frame, RejectsMalformedInput )
{
  EXPECT_THROW( FiniteFrame( { "a", "a" }, { "p" }, { { true }, { false } } ), InputError );
  EXPECT_THROW( FiniteFrame( { "a" }, { "p", "p" }, { { true, false } } ), InputError );
  EXPECT_THROW( FiniteFrame( { "a", "b" }, { "p" }, { { true }, { true, false } } ), InputError );
  EXPECT_THROW( FiniteFrame( { "a" }, { "p" }, {} ), InputError );
  std::vector<std::string> many;
  for ( int i = 0; i < 63; ++i )
    many.push_back( "m" + std::to_string( i ) );
  EXPECT_THROW( FiniteFrame( many, {}, std::vector<std::vector<bool>>( 63 ) ), InputError );
}

TEST( Frame, WidthMismatchIsInputError )
{
  const auto fr = fix3();
  EXPECT_THROW( mod_of( fr, FormulaSet( 0, 3 ) ), InputError );
  EXPECT_THROW( th_of( fr, ModelSet( 0, 2 ) ), InputError );
  EXPECT_THROW( definable_hull( fr, ModelSet( 0, 4 ) ), InputError );
  EXPECT_THROW( is_definable( fr, ModelSet( 0, 4 ) ), InputError );
}

TEST( Frame, FullDefinabilityFrame )
{
  for ( int n = 0; n <= 4; ++n )
  {
    const auto fr = full_definability_frame( n );
    EXPECT_EQ( definable_family_masks( fr ).size(), std::size_t{ 1 } << n );
    for ( Mask x = 0; x < ( Mask{ 1 } << n ); ++x )
      EXPECT_EQ( fr.hull_mask( x ), x );
  }
}

// Galois laws exhaustively on every small frame.
TEST( FrameProperty, GaloisLawsExhaustiveSmall )
{
  for ( int n = 0; n <= 3; ++n )
    for ( int l = 0; l <= 3; ++l )
      for ( Mask sat = 0; sat < ( Mask{ 1 } << ( n * l ) ); ++sat )
      {
        const auto fr = numbered_frame( n, l, sat );
        const oracle::Matrix mx( fr );
        const Mask ml = Mask{ 1 } << l, mm = Mask{ 1 } << n;
        for ( Mask a = 0; a < ml; ++a )
        {
          ASSERT_EQ( fr.mod_mask( a ), mx.mod( a ) );
          ASSERT_EQ( fr.mod_mask( fr.th_mask( fr.mod_mask( a ) ) ), fr.mod_mask( a ) );
        }
        for ( Mask x = 0; x < mm; ++x )
        {
          ASSERT_EQ( fr.th_mask( x ), mx.th( x ) );
          ASSERT_EQ( fr.hull_mask( x ), mx.hull( x ) );
          ASSERT_EQ( is_definable( fr, fr.model_set( x ) ), mx.definable( x ) );
        }
        ASSERT_EQ( definable_family_masks( fr ), mx.definables() );
      }
}

TEST( FrameProperty, GaloisLawsRandom )
{
  std::mt19937_64 rng( 20261016 );
  for ( int iter = 0; iter < 300; ++iter )
  {
    const auto fr = oracle::random_frame( rng, 6, 6 );
    const Mask ml = Mask{ 1 } << fr.formula_count(), mm = Mask{ 1 } << fr.model_count();
    for ( Mask a = 0; a < ml; ++a )
      for ( Mask b = 0; b < ml; ++b )
      {
        if ( is_subset( a, b ) )
        {
          ASSERT_TRUE( is_subset( fr.mod_mask( b ), fr.mod_mask( a ) ) );
        }
      }
    for ( Mask x = 0; x < mm; ++x )
    {
      const Mask h = fr.hull_mask( x );
      ASSERT_TRUE( is_subset( x, h ) );
      ASSERT_EQ( fr.hull_mask( h ), h );
      ASSERT_EQ( fr.th_mask( fr.mod_mask( fr.th_mask( x ) ) ), fr.th_mask( x ) );
      for ( Mask y = 0; y < mm; ++y )
        if ( is_subset( x, y ) )
        {
          ASSERT_TRUE( is_subset( fr.th_mask( y ), fr.th_mask( x ) ) );
          ASSERT_TRUE( is_subset( h, fr.hull_mask( y ) ) );
        }
    }
    const auto fam = definable_family_masks( fr );
    ASSERT_FALSE( fam.empty() );
    ASSERT_EQ( fam.back(), fr.all_models() );
    for ( Mask d : fam )
      for ( Mask e : fam )
        ASSERT_TRUE( std::find( fam.begin(), fam.end(), d & e ) != fam.end() );
    ASSERT_TRUE( std::is_sorted( fam.begin(), fam.end(), family_order ) );
  }
}

TEST( FrameProperty, UnionClosureMatchesBruteForce )
{
  std::mt19937_64 rng( 7 );
  for ( int iter = 0; iter < 300; ++iter )
  {
    const auto fr = oracle::random_frame( rng, 5, 4 );
    const oracle::Matrix mx( fr );
    const auto fam = mx.definables();
    bool closed = true;
    for ( Mask d : fam )
      for ( Mask e : fam )
        closed = closed && mx.definable( d | e );
    ASSERT_EQ( is_union_closed( fr ).holds, closed );
  }
}

TEST( Bits, SubmaskAndSupersetOrder )
{
  std::vector<Mask> seen;
  for_each_submask( 0b1010, [&]( Mask s ) { seen.push_back( s ); } );
  EXPECT_EQ( seen, ( std::vector<Mask>{ 0b0000, 0b0010, 0b1000, 0b1010 } ) );
  seen.clear();
  for_each_superset( 0b0001, 0b0111, [&]( Mask s ) { seen.push_back( s ); } );
  EXPECT_EQ( seen, ( std::vector<Mask>{ 0b001, 0b011, 0b101, 0b111 } ) );
  EXPECT_EQ( deposit_bits( 0b11, 0b1010 ), 0b1010u );
  EXPECT_EQ( extract_bits( 0b1000, 0b1010 ), 0b10u );
}

TEST( Bits, BitSetRejectsMixedWidths )
{
  EXPECT_THROW( ModelSet( 0b100, 2 ), InputError );
  EXPECT_THROW( ModelSet( 1, 2 ) & ModelSet( 1, 3 ), InputError );
  EXPECT_EQ( ( ModelSet( 0b01, 2 ) | ModelSet( 0b10, 2 ) ), ModelSet::full( 2 ) );
}
