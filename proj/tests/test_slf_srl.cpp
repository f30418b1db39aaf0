/* synkit: gate-level logic synthesis toolkit
 * SPDX-License-Identifier: Apache-2.0
 */

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include <synkit/slf.hpp>
#include <synkit/srl.hpp>

#include "random_fixtures.hpp"

using namespace synkit;

namespace
{

std::string read_file( std::string const& path )
{
  std::ifstream f( path );
  REQUIRE( f.good() );
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE( "slf: NAND2 cell with a 2x2 table parses" )
{
  auto lib = parse_cell_library( "library mini\ncell NAND2 area=1.0\npin A in cap=1\npin B in cap=1\n"
                                 "pin Y out\nfunction Y = !(A & B)\n"
                                 "arc A->Y slew=(10,50) load=(5,20) delay=(30,60; 40,80)\n"
                                 "arc B->Y slew=(10,50) load=(5,20) delay=(32,64; 44,82)\nend\n" );
  REQUIRE( lib.cells.size() == 1 );
  auto const& c = lib.cells[0];
  CHECK( c.area_ge == 1.0 );
  CHECK( c.inputs().size() == 2 );
  CHECK( ( c.truth_table() & 0xf ) == 0x7 );
  CHECK( c.arcs.size() == 2 );
  CHECK( c.arcs[0].table.eval( 10, 5 ) == 30.0 );
  CHECK( c.arcs[0].table.eval( 30, 12.5 ) == Catch::Approx( 52.5 ) );
}

TEST_CASE( "slf: decreasing load axis rejected" )
{
  CHECK_THROWS_AS( parse_cell_library( "library bad\ncell N area=1\npin A in cap=1\npin Y out\n"
                                       "function Y = !A\n"
                                       "arc A->Y slew=(10,50) load=(20,5) delay=(30,60; 40,80)\nend\n" ),
                   semantic_error );
}

TEST_CASE( "slf: function referencing an undeclared pin rejected" )
{
  CHECK_THROWS_AS( parse_cell_library( "library bad\ncell N area=1\npin A in cap=1\npin Y out\n"
                                       "function Y = !B\nend\n" ),
                   semantic_error );
}

TEST_CASE( "slf: bundled demo library parses with 7 cells" )
{
  auto lib = parse_cell_library( read_file( std::string( SYNKIT_DATA_DIR ) + "/demo7.slf" ) );
  CHECK( lib.name == "demo7" );
  CHECK( lib.cells.size() == 7 );
  for ( auto const* name : { "NOT", "BUF", "NAND2", "NOR2", "AND2", "XOR2", "MUX2" } )
    CHECK( lib.find( name ) != nullptr );
  CHECK( lib.nand2_area() == 1.0 );
}

TEST_CASE( "slf: round-trip is byte-stable" )
{
  auto text = read_file( std::string( SYNKIT_DATA_DIR ) + "/demo7.slf" );
  auto lib = parse_cell_library( text );
  auto w1 = write_cell_library( lib );
  auto lib2 = parse_cell_library( w1 );
  auto w2 = write_cell_library( lib2 );
  CHECK( w1 == w2 );

  std::mt19937_64 rng( 4242 );
  for ( int iter = 0; iter < 25; ++iter )
  {
    auto rnd = synkit_test::random_library( rng );
    auto a = write_cell_library( rnd );
    auto b = write_cell_library( parse_cell_library( a ) );
    CHECK( a == b );
  }
}

TEST_CASE( "srl: truncated entry rejected" )
{
  CHECK_THROWS_AS( read_record_library( "recordlib K=6\nrec tt=1 k=2 ands=1 depth=1\nn0 = AND(!x0, !x1)\nend\n" ),
                   semantic_error );
}

TEST_CASE( "srl: header bounds checked" )
{
  CHECK_THROWS_AS( read_record_library( "recordlib K=9\nend\n" ), semantic_error );
  CHECK_THROWS_AS( read_record_library( "rec tt=1 k=2 ands=0 depth=0\nout = x0\nend\n" ), syntax_error );
}
