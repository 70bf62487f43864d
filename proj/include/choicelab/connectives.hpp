#pragma once

#include <vector>

#include "errors.hpp"

namespace choicelab
{

/// Disjunction and negation as total tables on formula indices.
struct ConnectiveStructure
{
  int size = 0;
  std::vector<int> disjunction; ///< row-major size x size
  std::vector<int> negation;

  int disj( int a, int b ) const { return disjunction[static_cast<std::size_t>( a ) * size + b]; }
  int neg( int a ) const { return negation[a]; }

  void validate() const
  {
    if ( disjunction.size() != static_cast<std::size_t>( size ) * size || negation.size() != static_cast<std::size_t>( size ) )
      throw InputError( "connective tables are not total over the formula set" );
    for ( int v : disjunction )
      if ( v < 0 || v >= size )
        throw InputError( "disjunction table maps outside the formula set" );
    for ( int v : negation )
      if ( v < 0 || v >= size )
        throw InputError( "negation table maps outside the formula set" );
  }
};

} // namespace choicelab
