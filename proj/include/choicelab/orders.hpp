#pragma once

#include <utility>
#include <vector>

#include "bits.hpp"
#include "errors.hpp"

namespace choicelab
{

/// Relation on {0..n-1} as "beats" rows: bit y of beats[x] iff x beats y.
using Relation = std::vector<Mask>;

inline std::vector<std::pair<int, int>> edges_of( const Relation& beats )
{
  std::vector<std::pair<int, int>> out;
  for ( int x = 0; x < static_cast<int>( beats.size() ); ++x )
    for ( int y : indices_of( beats[x] ) )
      out.emplace_back( x, y );
  return out;
}

/*! \brief All strict partial orders on n labelled elements.

  Built by inserting element k into each order on {0..k-1}: the elements
  above k must be up-closed, those below k down-closed, and everything
  above must already beat everything below. Output order is deterministic.
*/
inline std::vector<Relation> strict_partial_orders( int n )
{
  if ( n < 0 || n > 6 )
    throw InputError( "strict partial order enumeration is capped at 6 elements" );
  std::vector<Relation> level{ Relation{} };
  for ( int k = 0; k < n; ++k )
  {
    std::vector<Relation> next;
    const Mask universe = low_bits( k );
    for ( const auto& order : level )
    {
      // beaten_by[y] = {x : x beats y}
      std::vector<Mask> beaten_by( k, 0 );
      for ( int x = 0; x < k; ++x )
        for ( int y : indices_of( order[x] ) )
          beaten_by[y] |= bit( x );
      for_each_submask( universe, [&]( Mask up ) {
        for ( int x : indices_of( up ) )
          if ( !is_subset( beaten_by[x], up ) )
            return;
        for_each_submask( universe & ~up, [&]( Mask down ) {
          for ( int y : indices_of( down ) )
            if ( !is_subset( order[y], down ) )
              return;
          for ( int x : indices_of( up ) )
            if ( !is_subset( down, order[x] ) )
              return;
          Relation r = order;
          for ( int x : indices_of( up ) )
            r[x] |= bit( k );
          r.push_back( down );
          next.push_back( std::move( r ) );
        } );
      } );
    }
    level = std::move( next );
  }
  return level;
}

/// All irreflexive relations on n elements, in counting order over the off-diagonal pairs.
inline std::vector<Relation> irreflexive_relations( int n )
{
  if ( n < 0 || n > 4 )
    throw InputError( "irreflexive relation enumeration is capped at 4 elements" );
  std::vector<std::pair<int, int>> pairs;
  for ( int x = 0; x < n; ++x )
    for ( int y = 0; y < n; ++y )
      if ( x != y )
        pairs.emplace_back( x, y );
  std::vector<Relation> out;
  for ( Mask code = 0; code < ( Mask{ 1 } << pairs.size() ); ++code )
  {
    Relation r( n, 0 );
    for ( int i : indices_of( code ) )
      r[pairs[i].first] |= bit( pairs[i].second );
    out.push_back( std::move( r ) );
  }
  return out;
}

} // namespace choicelab
