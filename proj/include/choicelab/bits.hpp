#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace choicelab
{

/// Raw subset encoding: bit i set iff element i is a member.
using Mask = std::uint64_t;

/// Frames are capped so that every subset fits in one machine word.
inline constexpr int kMaxWidth = 62;

/// Upper bound on widths for which a full 2^n table is materialized.
inline constexpr int kMaxTableWidth = 20;

/// Marks an undefined entry in a partial choice table.
inline constexpr Mask kUndefined = ~Mask{ 0 };

constexpr Mask low_bits( int n ) noexcept
{
  return n >= 64 ? ~Mask{ 0 } : ( Mask{ 1 } << n ) - 1;
}

constexpr Mask bit( int i ) noexcept { return Mask{ 1 } << i; }

constexpr bool is_subset( Mask a, Mask b ) noexcept { return ( a & ~b ) == 0; }

constexpr bool has_bit( Mask m, int i ) noexcept { return ( m >> i ) & 1u; }

inline int popcount( Mask m ) noexcept { return std::popcount( m ); }

/// Calls `fn(s)` for every submask `s` of `m`, in increasing numeric order.
template<class Fn>
void for_each_submask( Mask m, Fn&& fn )
{
  Mask s = 0;
  while ( true )
  {
    fn( s );
    if ( s == m )
      break;
    s = ( s - m ) & m;
  }
}

/// Calls `fn(y)` for every `y` with `x ⊆ y ⊆ universe`, in increasing order.
template<class Fn>
void for_each_superset( Mask x, Mask universe, Fn&& fn )
{
  for_each_submask( universe & ~x, [&]( Mask s ) { fn( x | s ); } );
}

/// Like for_each_submask, but stops as soon as `fn` returns true.
template<class Fn>
bool any_submask( Mask m, Fn&& fn )
{
  Mask s = 0;
  while ( true )
  {
    if ( fn( s ) )
      return true;
    if ( s == m )
      return false;
    s = ( s - m ) & m;
  }
}

template<class Fn>
bool any_superset( Mask x, Mask universe, Fn&& fn )
{
  return any_submask( universe & ~x, [&]( Mask s ) { return fn( x | s ); } );
}

inline std::vector<int> indices_of( Mask m )
{
  std::vector<int> out;
  while ( m )
  {
    out.push_back( std::countr_zero( m ) );
    m &= m - 1;
  }
  return out;
}

/// Scatters the low bits of `value` onto the set bits of `mask` (software pdep).
inline Mask deposit_bits( Mask value, Mask mask ) noexcept
{
  Mask out = 0;
  for ( Mask m = mask; m; m &= m - 1, value >>= 1 )
  {
    if ( value & 1u )
      out |= m & -m;
  }
  return out;
}

/// Inverse of deposit_bits: gathers the bits of `value` at the set bits of `mask`.
inline Mask extract_bits( Mask value, Mask mask ) noexcept
{
  Mask out = 0;
  int k = 0;
  for ( Mask m = mask; m; m &= m - 1, ++k )
  {
    if ( value & m & -m )
      out |= bit( k );
  }
  return out;
}

/// Fixed-width set over the elements of one frame axis.
///
/// The tag keeps model sets and formula sets from being mixed up; the width
/// travels with the value so that sets from different frames are rejected.
template<class Tag>
class BitSet
{
public:
  BitSet() = default;

  BitSet( Mask bits, int width ) : bits_( bits ), width_( width )
  {
    if ( width < 0 || width > kMaxWidth )
      throw InputError( "set width " + std::to_string( width ) + " outside [0, 62]" );
    if ( !is_subset( bits, low_bits( width ) ) )
      throw InputError( "set has members outside its width" );
  }

  static BitSet full( int width ) { return BitSet( low_bits( width ), width ); }
  static BitSet empty( int width ) { return BitSet( 0, width ); }

  Mask bits() const noexcept { return bits_; }
  int width() const noexcept { return width_; }
  int size() const noexcept { return popcount( bits_ ); }
  bool contains( int i ) const noexcept { return has_bit( bits_, i ); }
  bool empty() const noexcept { return bits_ == 0; }
  bool subset_of( const BitSet& other ) const
  {
    same_width( other );
    return is_subset( bits_, other.bits_ );
  }
  std::vector<int> indices() const { return indices_of( bits_ ); }

  friend BitSet operator&( const BitSet& a, const BitSet& b )
  {
    a.same_width( b );
    return BitSet( a.bits_ & b.bits_, a.width_ );
  }
  friend BitSet operator|( const BitSet& a, const BitSet& b )
  {
    a.same_width( b );
    return BitSet( a.bits_ | b.bits_, a.width_ );
  }

  friend bool operator==( const BitSet&, const BitSet& ) = default;
  friend auto operator<=>( const BitSet&, const BitSet& ) = default;

private:
  void same_width( const BitSet& other ) const
  {
    if ( width_ != other.width_ )
      throw InputError( "width mismatch: " + std::to_string( width_ ) + " vs " + std::to_string( other.width_ ) );
  }

  Mask bits_ = 0;
  int width_ = 0;
};

struct ModelTag;
struct FormulaTag;

using ModelSet = BitSet<ModelTag>;
using FormulaSet = BitSet<FormulaTag>;

} // namespace choicelab
