/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

/*!
  \file common.hpp
  \brief Shared identifiers, error types, and wide unsigned arithmetic
*/

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace synkit
{

using net_id = std::uint32_t;
using cell_id = std::uint32_t;

class syntax_error : public std::runtime_error
{
public:
  syntax_error( int line, int col, std::string const& expected )
      : std::runtime_error( "syntax error at " + std::to_string( line ) + ":" + std::to_string( col ) + ": expected " + expected ),
        line( line ), col( col ), expected( expected ) {}

  int line;
  int col;
  std::string expected;
};

class semantic_error : public std::runtime_error
{
public:
  semantic_error( int line, std::string const& what )
      : std::runtime_error( "semantic error at line " + std::to_string( line ) + ": " + what ), line( line ) {}

  int line;
};

class combinational_loop : public std::runtime_error
{
public:
  explicit combinational_loop( std::vector<cell_id> cycle )
      : std::runtime_error( "combinational loop through " + std::to_string( cycle.size() ) + " cells" ),
        cycle( std::move( cycle ) ) {}

  std::vector<cell_id> cycle;
};

class unmapped_cell : public std::runtime_error
{
public:
  explicit unmapped_cell( std::string const& what ) : std::runtime_error( "unmapped cell: " + what ) {}
};

class signature_mismatch : public std::runtime_error
{
public:
  explicit signature_mismatch( std::string const& what ) : std::runtime_error( "signature mismatch: " + what ) {}
};

class non_canonical_entry : public std::runtime_error
{
public:
  explicit non_canonical_entry( std::string const& what ) : std::runtime_error( "non-canonical record entry: " + what ) {}
};

class slew_out_of_range : public std::runtime_error
{
public:
  explicit slew_out_of_range( std::string const& what ) : std::runtime_error( "slew out of range: " + what ) {}
};

class unmatchable_function : public std::runtime_error
{
public:
  explicit unmatchable_function( std::string const& what ) : std::runtime_error( "unmatchable function: " + what ) {}
};

class missing_nand2 : public std::runtime_error
{
public:
  missing_nand2() : std::runtime_error( "library has no NAND2-equivalent cell for GE normalization" ) {}
};

/*! \brief Unsigned integer of arbitrary fixed width, little-endian limbs.
 *
 * All operations reduce modulo 2^width of the destination. Used for the
 * reference semantics of word-level cells (ADD, SUB, MUL, MACC, SHIFTX).
 */
class wide_uint
{
public:
  explicit wide_uint( uint32_t width = 0 ) : width_( width ), limbs_( ( width + 63 ) / 64, 0 ) {}

  static wide_uint from_u64( uint32_t width, uint64_t v )
  {
    wide_uint r( width );
    if ( !r.limbs_.empty() )
      r.limbs_[0] = v;
    r.trim();
    return r;
  }

  uint32_t width() const { return width_; }

  bool bit( uint32_t i ) const
  {
    if ( i >= width_ )
      return false;
    return ( limbs_[i >> 6] >> ( i & 63 ) ) & 1u;
  }

  void set_bit( uint32_t i, bool v )
  {
    if ( i >= width_ )
      return;
    uint64_t m = uint64_t( 1 ) << ( i & 63 );
    if ( v )
      limbs_[i >> 6] |= m;
    else
      limbs_[i >> 6] &= ~m;
  }

  /* value if it fits into 64 bits, otherwise saturates to UINT64_MAX */
  uint64_t to_u64_saturating() const
  {
    for ( size_t i = 1; i < limbs_.size(); ++i )
    {
      if ( limbs_[i] != 0 )
        return UINT64_MAX;
    }
    return limbs_.empty() ? 0 : limbs_[0];
  }

  static wide_uint add( wide_uint const& a, wide_uint const& b, uint32_t width )
  {
    wide_uint r( width );
    unsigned __int128 carry = 0;
    for ( size_t i = 0; i < r.limbs_.size(); ++i )
    {
      unsigned __int128 s = carry;
      if ( i < a.limbs_.size() )
        s += a.limbs_[i];
      if ( i < b.limbs_.size() )
        s += b.limbs_[i];
      r.limbs_[i] = static_cast<uint64_t>( s );
      carry = s >> 64;
    }
    r.trim();
    return r;
  }

  static wide_uint sub( wide_uint const& a, wide_uint const& b, uint32_t width )
  {
    /* a + ~b + 1 over `width` bits */
    wide_uint nb( width );
    for ( size_t i = 0; i < nb.limbs_.size(); ++i )
      nb.limbs_[i] = ~( i < b.limbs_.size() ? b.limbs_[i] : 0 );
    nb.trim();
    wide_uint one = from_u64( width, 1 );
    return add( add( a, nb, width ), one, width );
  }

  static wide_uint mul( wide_uint const& a, wide_uint const& b, uint32_t width )
  {
    wide_uint r( width );
    for ( size_t i = 0; i < a.limbs_.size(); ++i )
    {
      if ( a.limbs_[i] == 0 )
        continue;
      unsigned __int128 carry = 0;
      for ( size_t j = 0; i + j < r.limbs_.size(); ++j )
      {
        unsigned __int128 cur = r.limbs_[i + j];
        cur += carry;
        if ( j < b.limbs_.size() )
          cur += static_cast<unsigned __int128>( a.limbs_[i] ) * b.limbs_[j];
        r.limbs_[i + j] = static_cast<uint64_t>( cur );
        carry = cur >> 64;
      }
    }
    r.trim();
    return r;
  }

  bool operator==( wide_uint const& other ) const
  {
    size_t n = std::max( limbs_.size(), other.limbs_.size() );
    for ( size_t i = 0; i < n; ++i )
    {
      uint64_t x = i < limbs_.size() ? limbs_[i] : 0;
      uint64_t y = i < other.limbs_.size() ? other.limbs_[i] : 0;
      if ( x != y )
        return false;
    }
    return true;
  }

private:
  void trim()
  {
    if ( width_ % 64 != 0 && !limbs_.empty() )
      limbs_.back() &= ( uint64_t( 1 ) << ( width_ % 64 ) ) - 1;
  }

  uint32_t width_;
  std::vector<uint64_t> limbs_;
};

inline uint32_t clog2( uint64_t n )
{
  uint32_t r = 0;
  while ( ( uint64_t( 1 ) << r ) < n )
    ++r;
  return r;
}

} // namespace synkit
