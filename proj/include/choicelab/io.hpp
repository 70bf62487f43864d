#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bridge.hpp"
#include "choice.hpp"
#include "consequence.hpp"
#include "frame.hpp"
#include "report.hpp"
#include "search.hpp"

namespace choicelab
{

using json = nlohmann::ordered_json;

inline json read_json_file( const std::string& path )
{
  std::ifstream in( path );
  if ( !in )
    throw InputError( path + ": cannot open file" );
  try
  {
    return json::parse( in );
  }
  catch ( const json::parse_error& e )
  {
    throw InputError( path + ": malformed JSON (" + e.what() + ")" );
  }
}

inline void write_json_file( const std::string& path, const json& j )
{
  std::ofstream out( path );
  if ( !out )
    throw InputError( path + ": cannot write file" );
  out << j.dump( 2 ) << '\n';
}

namespace detail
{

inline const json& field( const json& j, const char* name )
{
  if ( !j.is_object() || !j.contains( name ) )
    throw InputError( std::string( name ) + ": missing field" );
  return j.at( name );
}

inline std::vector<std::string> string_list( const json& j, const std::string& where )
{
  if ( !j.is_array() )
    throw InputError( where + ": expected an array of strings" );
  std::vector<std::string> out;
  for ( std::size_t i = 0; i < j.size(); ++i )
  {
    if ( !j[i].is_string() )
      throw InputError( where + "[" + std::to_string( i ) + "]: expected a string" );
    out.push_back( j[i].get<std::string>() );
  }
  return out;
}

inline Mask names_to_mask( const json& j, const std::vector<std::string>& universe, const std::string& where )
{
  Mask m = 0;
  for ( const auto& name : string_list( j, where ) )
  {
    auto it = std::find( universe.begin(), universe.end(), name );
    if ( it == universe.end() )
      throw InputError( where + ": unknown identifier \"" + name + "\"" );
    m |= bit( static_cast<int>( it - universe.begin() ) );
  }
  return m;
}

inline json names_json( const std::vector<std::string>& universe, Mask m )
{
  json out = json::array();
  for ( int i : indices_of( m ) )
    out.push_back( universe[i] );
  return out;
}

inline std::vector<std::string> numbered_names( int n )
{
  std::vector<std::string> out;
  for ( int i = 0; i < n; ++i )
    out.push_back( std::to_string( i + 1 ) );
  return out;
}

} // namespace detail

// ---------------------------------------------------------------- frames

inline json frame_to_json( const FiniteFrame& frame )
{
  json sat = json::array();
  for ( int m = 0; m < frame.model_count(); ++m )
  {
    json row = json::array();
    for ( int a = 0; a < frame.formula_count(); ++a )
      row.push_back( frame.sat( m, a ) ? 1 : 0 );
    sat.push_back( std::move( row ) );
  }
  return json{ { "models", frame.models() }, { "formulas", frame.formulas() }, { "satisfaction", std::move( sat ) } };
}

inline FiniteFrame frame_from_json( const json& j )
{
  auto models = detail::string_list( detail::field( j, "models" ), "models" );
  auto formulas = detail::string_list( detail::field( j, "formulas" ), "formulas" );
  const auto& sat = detail::field( j, "satisfaction" );
  if ( !sat.is_array() )
    throw InputError( "satisfaction: expected an array of rows" );
  std::vector<std::vector<bool>> rows;
  for ( std::size_t m = 0; m < sat.size(); ++m )
  {
    const std::string where = "satisfaction[" + std::to_string( m ) + "]";
    if ( !sat[m].is_array() )
      throw InputError( where + ": expected an array" );
    std::vector<bool> row;
    for ( std::size_t a = 0; a < sat[m].size(); ++a )
    {
      const auto& v = sat[m][a];
      if ( !v.is_number_integer() || ( v.get<long long>() != 0 && v.get<long long>() != 1 ) )
        throw InputError( where + "[" + std::to_string( a ) + "]: expected 0 or 1" );
      row.push_back( v.get<long long>() == 1 );
    }
    rows.push_back( std::move( row ) );
  }
  return FiniteFrame( std::move( models ), std::move( formulas ), rows );
}

inline FiniteFrame read_frame( const std::string& path )
{
  const auto j = read_json_file( path );
  try
  {
    return frame_from_json( j );
  }
  catch ( const InputError& e )
  {
    throw InputError( path + ": " + e.what() );
  }
}

// ---------------------------------------------------------------- choice functions

/// Table form lists every subset; preferential form lists the edges.
inline json choice_to_json( const std::vector<std::string>& models, const ChoiceFunction& f )
{
  if ( const auto* p = f.as_preference() )
  {
    json edges = json::array();
    for ( auto [x, y] : p->edges )
      edges.push_back( json::array( { models[x], models[y] } ) );
    return json{ { "kind", "preference" }, { "strict", f.is_strict_partial_order() }, { "edges", std::move( edges ) } };
  }
  json entries = json::array();
  const auto& values = f.as_table()->values;
  for ( Mask x = 0; x < values.size(); ++x )
  {
    if ( values[x] == kUndefined )
      continue;
    entries.push_back( json{ { "set", detail::names_json( models, x ) }, { "value", detail::names_json( models, values[x] ) } } );
  }
  return json{ { "kind", "table" }, { "entries", std::move( entries ) }, { "default", "none" } };
}

inline ChoiceFunction choice_from_json( const json& j, const FiniteFrame& frame )
{
  const auto& kind = detail::field( j, "kind" );
  if ( kind == "preference" )
  {
    bool strict = false;
    if ( j.contains( "strict" ) )
    {
      if ( !j["strict"].is_boolean() )
        throw InputError( "strict: expected true or false" );
      strict = j["strict"].get<bool>();
    }
    const auto& edges = detail::field( j, "edges" );
    if ( !edges.is_array() )
      throw InputError( "edges: expected an array of pairs" );
    std::vector<std::pair<std::string, std::string>> pairs;
    for ( std::size_t i = 0; i < edges.size(); ++i )
    {
      auto pair = detail::string_list( edges[i], "edges[" + std::to_string( i ) + "]" );
      if ( pair.size() != 2 )
        throw InputError( "edges[" + std::to_string( i ) + "]: expected a pair" );
      pairs.emplace_back( pair[0], pair[1] );
    }
    return make_preferential( frame, pairs, strict );
  }
  if ( kind != "table" )
    throw InputError( "kind: expected \"table\" or \"preference\"" );
  const int n = frame.model_count();
  if ( n > kMaxTableWidth )
    throw InputError( "kind: table choice functions are capped at 20 models" );
  std::string fallback = "none";
  if ( j.contains( "default" ) )
  {
    if ( !j["default"].is_string() || ( j["default"] != "identity" && j["default"] != "none" ) )
      throw InputError( "default: expected \"identity\" or \"none\"" );
    fallback = j["default"].get<std::string>();
  }
  std::vector<Mask> values( std::size_t{ 1 } << n, kUndefined );
  const auto& entries = detail::field( j, "entries" );
  if ( !entries.is_array() )
    throw InputError( "entries: expected an array" );
  for ( std::size_t i = 0; i < entries.size(); ++i )
  {
    const std::string where = "entries[" + std::to_string( i ) + "]";
    Mask set = detail::names_to_mask( detail::field( entries[i], "set" ), frame.models(), where + ".set" );
    Mask value = detail::names_to_mask( detail::field( entries[i], "value" ), frame.models(), where + ".value" );
    if ( values[set] != kUndefined )
      throw InputError( where + ".set: duplicate entry" );
    values[set] = value;
  }
  for ( Mask x = 0; x < values.size(); ++x )
    if ( values[x] == kUndefined )
    {
      if ( fallback == "none" )
        throw InputError( "entries: no entry for set " + set_label( frame.models(), x ) );
      values[x] = x;
    }
  return ChoiceFunction::table( n, std::move( values ) );
}

inline ChoiceFunction read_choice( const std::string& path, const FiniteFrame& frame )
{
  const auto j = read_json_file( path );
  try
  {
    return choice_from_json( j, frame );
  }
  catch ( const InputError& e )
  {
    throw InputError( path + ": " + e.what() );
  }
}

// ---------------------------------------------------------------- consequence operations

inline json consequence_to_json( const ConsequenceOperation& c )
{
  const auto table = c.materialize();
  json entries = json::array();
  for ( Mask a = 0; a < table.size(); ++a )
    entries.push_back(
        json{ { "set", detail::names_json( c.formulas(), a ) }, { "value", detail::names_json( c.formulas(), table[a] ) } } );
  return json{ { "formulas", c.formulas() }, { "entries", std::move( entries ) } };
}

inline ConsequenceOperation consequence_from_json( const json& j )
{
  auto formulas = detail::string_list( detail::field( j, "formulas" ), "formulas" );
  if ( formulas.size() > kMaxTableWidth )
    throw InputError( "formulas: explicit operations are capped at 20 formulas" );
  {
    std::vector<std::string> sorted = formulas;
    std::sort( sorted.begin(), sorted.end() );
    if ( std::adjacent_find( sorted.begin(), sorted.end() ) != sorted.end() )
      throw InputError( "formulas: duplicate identifier" );
  }
  std::vector<Mask> table( std::size_t{ 1 } << formulas.size(), kUndefined );
  const auto& entries = detail::field( j, "entries" );
  if ( !entries.is_array() )
    throw InputError( "entries: expected an array" );
  for ( std::size_t i = 0; i < entries.size(); ++i )
  {
    const std::string where = "entries[" + std::to_string( i ) + "]";
    Mask set = detail::names_to_mask( detail::field( entries[i], "set" ), formulas, where + ".set" );
    Mask value = detail::names_to_mask( detail::field( entries[i], "value" ), formulas, where + ".value" );
    if ( table[set] != kUndefined )
      throw InputError( where + ".set: duplicate entry" );
    table[set] = value;
  }
  for ( Mask a = 0; a < table.size(); ++a )
    if ( table[a] == kUndefined )
      throw InputError( "entries: missing set " + set_label( formulas, a ) );
  return ConsequenceOperation::explicit_table( std::move( formulas ), std::move( table ) );
}

inline ConsequenceOperation read_consequence( const std::string& path )
{
  const auto j = read_json_file( path );
  try
  {
    return consequence_from_json( j );
  }
  catch ( const InputError& e )
  {
    throw InputError( path + ": " + e.what() );
  }
}

// ---------------------------------------------------------------- reports

inline json binding_value( const Binding& b )
{
  if ( b.domain == Domain::formula )
    return b.names.empty() ? json() : json( b.names.front() );
  return json( b.names );
}

inline json report_to_json( const PropertyReport& r )
{
  json witness;
  if ( !r.witness.empty() )
  {
    witness = json::object();
    for ( const auto& b : r.witness )
      witness[b.var] = binding_value( b );
  }
  json j{ { "property", r.property },
          { "holds", r.holds },
          { "witness", std::move( witness ) },
          { "checked", r.checked },
          { "skipped", r.skipped } };
  if ( r.skipped )
    j["reason"] = r.reason;
  return j;
}

inline json reports_to_json( const std::vector<PropertyReport>& reports )
{
  json out = json::array();
  for ( const auto& r : reports )
    out.push_back( report_to_json( r ) );
  return out;
}

inline json theorem_to_json( const TheoremReport& t )
{
  json j{ { "theorem", t.theorem },
          { "hypotheses", reports_to_json( t.hypotheses ) },
          { "conclusions", reports_to_json( t.conclusions ) },
          { "identities", reports_to_json( t.identities ) },
          { "overall", t.overall } };
  if ( !t.note.empty() )
    j["note"] = t.note;
  return j;
}

inline std::vector<std::string> property_names( const std::vector<ChoiceProperty>& ps )
{
  std::vector<std::string> out;
  for ( auto p : ps )
    out.emplace_back( name_of( p ) );
  return out;
}

inline json witness_to_json( const Witness& w )
{
  const auto models = w.frame ? w.frame->models() : detail::numbered_names( w.models );
  auto violation = []( const PropertyReport& r ) {
    json sets = json::object();
    for ( const auto& b : r.witness )
      sets[b.var] = binding_value( b );
    return json{ { "property", r.property }, { "witness", std::move( sets ) } };
  };
  json j{ { "frame", w.frame ? frame_to_json( *w.frame ) : json() },
          { "choice", choice_to_json( models, w.choice ) },
          { "satisfied", property_names( w.satisfied ) },
          { "violated", w.violated.empty() ? json() : violation( w.violated.front() ) } };
  if ( w.violated.size() > 1 )
  {
    json more = json::array();
    for ( std::size_t i = 1; i < w.violated.size(); ++i )
      more.push_back( violation( w.violated[i] ) );
    j["additional_violations"] = std::move( more );
  }
  return j;
}

inline json mine_result_to_json( const MineResult& r )
{
  json sizes = json::array();
  for ( const auto& s : r.sizes )
    sizes.push_back( json{ { "models", s.models }, { "space", s.space }, { "visited", s.visited } } );
  return json{ { "found", r.witness.has_value() },
               { "visited", r.visited },
               { "sizes", std::move( sizes ) },
               { "witness", r.witness ? witness_to_json( *r.witness ) : json() } };
}

inline json arrow_study_to_json( const ArrowStudy& s )
{
  return json{ { "max_models", s.max_models },
               { "contraction_arrow_nonempty", mine_result_to_json( s.with_nonempty ) },
               { "contraction_arrow", mine_result_to_json( s.without_nonempty ) },
               { "proviso",
                 "Expansion follows from Contraction and Arrow only for choice functions that are nonempty on "
                 "nonempty sets" } };
}

inline json preferential_search_to_json( const PreferentialSearch& s )
{
  json order;
  if ( s.order )
  {
    order = json::array();
    for ( auto [x, y] : edges_of( *s.order ) )
      order.push_back( json::array( { s.frame.models()[x], s.frame.models()[y] } ) );
  }
  return json{ { "found", s.order.has_value() },
               { "theories", s.frame.models() },
               { "orders_total", s.orders_total },
               { "orders_checked", s.orders_checked },
               { "edges", std::move( order ) } };
}

// ---------------------------------------------------------------- text rendering

inline std::string binding_text( const Binding& b )
{
  if ( b.domain == Domain::formula )
    return b.var + "=" + ( b.names.empty() ? std::string() : b.names.front() );
  std::string s = b.var + "={";
  for ( std::size_t i = 0; i < b.names.size(); ++i )
    s += ( i ? "," : "" ) + b.names[i];
  return s + "}";
}

inline std::string report_text( const PropertyReport& r )
{
  std::ostringstream out;
  out << r.property << ": ";
  if ( r.skipped )
    out << "skipped (" << r.reason << ")";
  else if ( r.holds )
    out << "holds (checked " << r.checked << ")";
  else
  {
    out << "FAILS (checked " << r.checked << ")";
    for ( const auto& b : r.witness )
      out << " " << binding_text( b );
  }
  return out.str();
}

} // namespace choicelab
