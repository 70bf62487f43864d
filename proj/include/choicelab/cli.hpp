#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bridge.hpp"
#include "io.hpp"
#include "proplang.hpp"
#include "search.hpp"

namespace choicelab
{

struct RunResult
{
  int exit_code = 0; ///< 0 all checks hold, 1 violation or witness found, 2 input error
  std::string out;
  std::string err;
};

namespace detail
{

/// Report payload in both renderings plus the verdict that decides the exit code.
struct Payload
{
  json doc;
  std::vector<std::string> lines;
  bool violation = false;
};

inline std::vector<ChoiceProperty> parse_choice_list( const std::vector<std::string>& names, const std::string& flag )
{
  std::vector<ChoiceProperty> out;
  for ( const auto& n : names )
  {
    auto p = parse_choice_property( n );
    if ( !p )
      throw InputError( flag + ": unknown choice property \"" + n + "\"" );
    out.push_back( *p );
  }
  return out;
}

inline std::vector<ConsequenceProperty> parse_consequence_list( const std::vector<std::string>& names,
                                                                const std::string& flag )
{
  std::vector<ConsequenceProperty> out;
  for ( const auto& n : names )
  {
    auto p = parse_consequence_property( n );
    if ( !p )
      throw InputError( flag + ": unknown consequence property \"" + n + "\"" );
    out.push_back( p.value() );
  }
  return out;
}

inline std::string mask_text( const std::vector<std::string>& names, Mask m ) { return set_label( names, m ); }

inline void add_reports( Payload& p, const std::vector<PropertyReport>& reports, const std::string& prefix = "" )
{
  for ( const auto& r : reports )
  {
    p.lines.push_back( prefix + report_text( r ) );
    if ( !r.ok() )
      p.violation = true;
  }
}

inline Payload theorem_payload( const TheoremReport& t )
{
  Payload p;
  p.doc = theorem_to_json( t );
  p.lines.push_back( "theorem " + t.theorem + ": overall " + ( t.overall ? "true" : "false" ) );
  if ( !t.note.empty() )
    p.lines.push_back( "note: " + t.note );
  for ( const auto& r : t.hypotheses )
    p.lines.push_back( "hypothesis " + report_text( r ) );
  for ( const auto& r : t.conclusions )
    p.lines.push_back( "conclusion " + report_text( r ) );
  for ( const auto& r : t.identities )
    p.lines.push_back( "identity " + report_text( r ) );
  p.violation = !t.overall;
  return p;
}

inline void mine_lines( Payload& p, const MineResult& r, const std::string& prefix )
{
  for ( const auto& s : r.sizes )
    p.lines.push_back( prefix + "size " + std::to_string( s.models ) + ": visited " + std::to_string( s.visited ) +
                       " of " + std::to_string( s.space ) );
  if ( !r.witness )
  {
    p.lines.push_back( prefix + "no witness (visited " + std::to_string( r.visited ) + ")" );
    return;
  }
  const auto& w = *r.witness;
  const auto models = w.frame ? w.frame->models() : numbered_names( w.models );
  p.lines.push_back( prefix + "witness over " + std::to_string( w.models ) + " models at index " +
                     std::to_string( w.index ) );
  if ( w.frame )
    for ( int m = 0; m < w.frame->model_count(); ++m )
      p.lines.push_back( prefix + "frame " + models[m] + " satisfies " +
                         mask_text( w.frame->formulas(), w.frame->row( m ) ) );
  const auto table = w.choice.materialize();
  for ( Mask x = 0; x < table.size(); ++x )
    p.lines.push_back( prefix + "f(" + mask_text( models, x ) + ") = " + mask_text( models, table[x] ) );
  for ( auto s : w.satisfied )
    p.lines.push_back( prefix + std::string( name_of( s ) ) + ": holds" );
  for ( const auto& v : w.violated )
    p.lines.push_back( prefix + report_text( v ) );
}

inline Payload mine_payload( const MineResult& r )
{
  Payload p;
  p.doc = mine_result_to_json( r );
  mine_lines( p, r, "" );
  p.violation = r.witness.has_value();
  return p;
}

} // namespace detail

/*! \brief Parses `args` (without the program name) and runs one subcommand.

  Reports go to `out`, diagnostics to `err`.
*/
inline RunResult run( const std::vector<std::string>& args )
{
  using detail::Payload;
  RunResult result;
  std::string format = "json";
  int jobs = 1;

  CLI::App app{ "choicelab: choice functions, consequence operations and their correspondence" };
  app.name( "choicelab" );
  app.require_subcommand( 1 );
  app.fallthrough();
  app.add_option( "--format", format, "Report format" )->check( CLI::IsMember( { "json", "text" } ) );
  app.add_option( "--jobs", jobs, "Worker threads for searches" )->check( CLI::PositiveNumber );

  std::vector<std::string> properties;
  std::string scope = "all";
  std::string frame_path, choice_path, cons_path;
  std::vector<std::string> outputs;
  bool union_closed = false;
  int atoms = -1;

  auto* check_frame = app.add_subcommand( "check-frame", "Summarize a frame and its definable sets" );
  check_frame->add_option( "FRAME", frame_path )->required();
  check_frame->add_flag( "--union-closed", union_closed, "Check that unions of definable sets are definable" );

  auto* check_choice = app.add_subcommand( "check-choice", "Check choice-function properties" );
  check_choice->add_option( "FRAME", frame_path )->required();
  check_choice->add_option( "CHOICE", choice_path )->required();
  check_choice->add_option( "--properties", properties, "Comma-separated property names" )->required()->delimiter( ',' );
  check_choice->add_option( "--scope", scope )->check( CLI::IsMember( { "all", "definable" } ) );

  auto* check_cons = app.add_subcommand( "check-consequence", "Check consequence-operation properties" );
  check_cons->add_option( "CONS", cons_path )->required();
  check_cons->add_option( "--properties", properties, "Comma-separated property names" )->required()->delimiter( ',' );
  check_cons->add_option( "--atoms", atoms, "Truth-table language for the connective properties" );

  auto* derive = app.add_subcommand( "derive-c", "Write the consequence operation derived from a frame and choice" );
  derive->add_option( "FRAME", frame_path )->required();
  derive->add_option( "CHOICE", choice_path )->required();
  derive->add_option( "-o", outputs )->required()->expected( 1 );

  auto* canonical = app.add_subcommand( "canonical", "Write the canonical frame and choice of an operation" );
  canonical->add_option( "CONS", cons_path )->required();
  canonical->add_option( "-o", outputs, "FRAME_OUT CHOICE_OUT" )->required()->expected( 2 );

  auto* thm1 = app.add_subcommand( "theorem1", "Operation side to choice side" );
  thm1->add_option( "CONS", cons_path )->required();

  auto* thm2 = app.add_subcommand( "theorem2", "Choice side to operation side" );
  thm2->add_option( "FRAME", frame_path )->required();
  thm2->add_option( "CHOICE", choice_path )->required();

  auto* thm3 = app.add_subcommand( "theorem3", "Completeness search on a truth-table language" );
  thm3->add_option( "CONS", cons_path )->required();
  thm3->add_option( "--atoms", atoms )->required();

  auto* prop_frame = app.add_subcommand( "prop-frame", "Write the truth-table frame over k atoms" );
  prop_frame->add_option( "--atoms", atoms )->required();
  prop_frame->add_option( "-o", outputs )->required()->expected( 1 );

  std::vector<std::string> satisfy, violate;
  int min_models = 0, max_models = 3, max_formulas = 2;
  std::string frame_mode = "none";
  bool exhaustive = false;
  std::uint64_t seed = 0, budget = 0;
  auto* mine_cmd = app.add_subcommand( "mine", "Search for a choice function separating two property lists" );
  mine_cmd->add_option( "--satisfy", satisfy, "Properties the witness must have" )->delimiter( ',' );
  mine_cmd->add_option( "--violate", violate, "Properties the witness must all break" )->required()->delimiter( ',' );
  mine_cmd->add_option( "--max-models", max_models )->required();
  mine_cmd->add_option( "--min-models", min_models, "Smallest ground set tried" );
  mine_cmd->add_option( "--max-formulas", max_formulas, "Formula count for enumerated frames" );
  mine_cmd->add_option( "--frame-mode", frame_mode )
      ->check( CLI::IsMember( { "none", "all-definable", "enumerate" } ) );
  auto* exhaustive_flag = mine_cmd->add_flag( "--exhaustive", exhaustive, "Scan every candidate in order (default)" );
  auto* random_opt = mine_cmd->add_option( "--random", seed, "Seed for random sampling" );
  auto* budget_opt = mine_cmd->add_option( "--budget", budget, "Candidates to sample" );
  exhaustive_flag->excludes( random_opt );
  random_opt->needs( budget_opt );
  budget_opt->needs( random_opt );

  auto* arrow = app.add_subcommand( "study-arrow", "Contraction and Arrow against Expansion" );
  arrow->add_option( "--max-models", max_models )->required();

  auto* find_pref = app.add_subcommand( "find-pref", "Search for a strict order representing an operation" );
  find_pref->add_option( "CONS", cons_path )->required();

  std::ostringstream out, err;
  try
  {
    std::vector<std::string> reversed( args.rbegin(), args.rend() );
    app.parse( reversed );
  }
  catch ( const CLI::CallForHelp& e )
  {
    app.exit( e, out, err );
    return { 0, out.str(), err.str() };
  }
  catch ( const CLI::CallForAllHelp& e )
  {
    app.exit( e, out, err );
    return { 0, out.str(), err.str() };
  }
  catch ( const CLI::ParseError& e )
  {
    err << "error: " << e.what() << '\n';
    return { 2, "", err.str() };
  }

  Payload payload;
  try
  {
    if ( *check_frame )
    {
      const auto frame = read_frame( frame_path );
      const auto family = definable_family_masks( frame );
      json fam = json::array();
      std::string line = "definable:";
      for ( Mask d : family )
      {
        fam.push_back( detail::names_json( frame.models(), d ) );
        line += " " + set_label( frame.models(), d );
      }
      payload.doc = json{ { "models", frame.model_count() },
                          { "formulas", frame.formula_count() },
                          { "definable", std::move( fam ) } };
      payload.lines = { "models: " + std::to_string( frame.model_count() ),
                        "formulas: " + std::to_string( frame.formula_count() ), line };
      if ( union_closed )
      {
        const auto uc = is_union_closed( frame );
        PropertyReport r{ "union-closed" };
        r.holds = uc.holds;
        r.checked = uc.pairs_checked;
        if ( uc.witness )
          r.witness = { Binding{ "X", Domain::models, uc.witness->first.bits(),
                                 frame.model_names( uc.witness->first.bits() ) },
                        Binding{ "Y", Domain::models, uc.witness->second.bits(),
                                 frame.model_names( uc.witness->second.bits() ) } };
        payload.doc["union_closed"] = report_to_json( r );
        detail::add_reports( payload, { r } );
      }
    }
    else if ( *check_choice )
    {
      const auto frame = read_frame( frame_path );
      const auto f = read_choice( choice_path, frame );
      const auto ps = detail::parse_choice_list( properties, "--properties" );
      const ChoiceEvaluator ev( frame, f );
      std::vector<PropertyReport> reports;
      for ( auto p : ps )
        reports.push_back( ev.evaluate( p, scope == "definable" ? Scope::definable_only : Scope::all_subsets ) );
      payload.doc = reports_to_json( reports );
      detail::add_reports( payload, reports );
    }
    else if ( *check_cons )
    {
      const auto c = read_consequence( cons_path );
      const auto ps = detail::parse_consequence_list( properties, "--properties" );
      std::optional<PropFrame> pf;
      if ( atoms >= 0 )
      {
        pf = build_prop_frame( atoms );
        require_language( *pf, c );
      }
      const ConsequenceEvaluator ev( c, pf ? &pf->frame : nullptr, pf ? &pf->connectives : nullptr );
      std::vector<PropertyReport> reports;
      for ( auto p : ps )
        reports.push_back( ev.evaluate( p ) );
      payload.doc = reports_to_json( reports );
      detail::add_reports( payload, reports );
    }
    else if ( *derive )
    {
      const auto frame = read_frame( frame_path );
      const auto f = read_choice( choice_path, frame );
      if ( frame.formula_count() > kMaxTableWidth )
        throw InputError( "formulas: writing an explicit operation is capped at 20 formulas" );
      const auto c = derive_consequence( frame, f );
      write_json_file( outputs[0], consequence_to_json( c ) );
      payload.doc = json{ { "written", outputs[0] }, { "formulas", c.width() } };
      payload.lines = { "wrote " + outputs[0] + " (" + std::to_string( c.width() ) + " formulas)" };
    }
    else if ( *canonical )
    {
      const auto c = read_consequence( cons_path );
      const auto cf = canonical_frame( c );
      if ( cf.model_count() > kMaxTableWidth )
        throw InputError( "canonical frame has " + std::to_string( cf.model_count() ) +
                          " theories; choice tables are capped at 20 models" );
      const auto f = canonical_choice( c, cf );
      write_json_file( outputs[0], frame_to_json( cf ) );
      write_json_file( outputs[1], choice_to_json( cf.models(), f ) );
      payload.doc = json{ { "frame", outputs[0] }, { "choice", outputs[1] }, { "theories", cf.model_count() } };
      payload.lines = { "wrote " + outputs[0] + " and " + outputs[1] + " (" + std::to_string( cf.model_count() ) +
                        " theories)" };
    }
    else if ( *thm1 )
      payload = detail::theorem_payload( verify_theorem1( read_consequence( cons_path ) ) );
    else if ( *thm2 )
    {
      const auto frame = read_frame( frame_path );
      payload = detail::theorem_payload( verify_theorem2( frame, read_choice( choice_path, frame ) ) );
    }
    else if ( *thm3 )
    {
      const auto c = read_consequence( cons_path );
      const auto pf = build_prop_frame( atoms );
      payload = detail::theorem_payload( search_theorem3_completeness( c, pf ) );
    }
    else if ( *prop_frame )
    {
      const auto pf = build_prop_frame( atoms );
      write_json_file( outputs[0], frame_to_json( pf.frame ) );
      payload.doc = json{ { "written", outputs[0] },
                          { "models", pf.frame.model_count() },
                          { "formulas", pf.frame.formula_count() } };
      payload.lines = { "wrote " + outputs[0] + " (" + std::to_string( pf.frame.model_count() ) + " valuations, " +
                        std::to_string( pf.frame.formula_count() ) + " formulas)" };
    }
    else if ( *mine_cmd )
    {
      MineConfig cfg;
      cfg.satisfy = detail::parse_choice_list( satisfy, "--satisfy" );
      cfg.violate = detail::parse_choice_list( violate, "--violate" );
      cfg.min_models = min_models;
      cfg.max_models = max_models;
      cfg.max_formulas = max_formulas;
      cfg.frame_mode = frame_mode == "none"            ? FrameMode::none
                       : frame_mode == "all-definable" ? FrameMode::all_definable
                                                       : FrameMode::enumerate;
      cfg.mode = random_opt->count() ? SearchMode::random : SearchMode::exhaustive;
      cfg.seed = seed;
      cfg.budget = budget;
      cfg.jobs = jobs;
      payload = detail::mine_payload( mine( cfg ) );
    }
    else if ( *arrow )
    {
      const auto s = study_arrow_expansion( max_models, jobs );
      payload.doc = arrow_study_to_json( s );
      detail::mine_lines( payload, s.with_nonempty, "contraction+arrow+nonempty: " );
      detail::mine_lines( payload, s.without_nonempty, "contraction+arrow: " );
      payload.violation = s.with_nonempty.witness || s.without_nonempty.witness;
    }
    else if ( *find_pref )
    {
      const auto s = find_preferential_representation( read_consequence( cons_path ), jobs );
      payload.doc = preferential_search_to_json( s );
      std::string line = s.order ? "order found:" : "no order found";
      if ( s.order )
        for ( auto [x, y] : edges_of( *s.order ) )
          line += " " + s.frame.models()[x] + ">" + s.frame.models()[y];
      payload.lines = { "theories: " + std::to_string( s.frame.model_count() ),
                        "orders checked: " + std::to_string( s.orders_checked ) + " of " +
                            std::to_string( s.orders_total ),
                        line };
      payload.violation = !s.order;
    }
  }
  catch ( const InputError& e )
  {
    err << "error: " << e.what() << '\n';
    return { 2, "", err.str() };
  }

  if ( format == "json" )
    out << payload.doc.dump( 2 ) << '\n';
  else
    for ( const auto& l : payload.lines )
      out << l << '\n';
  result.exit_code = payload.violation ? 1 : 0;
  result.out = out.str();
  result.err = err.str();
  return result;
}

} // namespace choicelab
