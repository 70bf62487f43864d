#pragma once

#include <string>
#include <vector>

#include "choice.hpp"
#include "consequence.hpp"
#include "frame.hpp"
#include "report.hpp"

namespace choicelab
{

/// C(A) = Th(f(Mod(A))).
inline ConsequenceOperation derive_consequence( const FiniteFrame& frame, const ChoiceFunction& f )
{
  return ConsequenceOperation::derived( frame, f );
}

/// How "theory" is read when building the canonical frame.
enum class TheoryReading
{
  fixed_point, ///< C(T) = T
  closed_under ///< C(T) ⊆ T; agrees with fixed_point whenever Inclusion holds
};

/// Renders a formula set as "{p,q}"; used to name theories.
inline std::string set_label( const std::vector<std::string>& names, Mask m )
{
  std::string out = "{";
  bool first = true;
  for ( int i : indices_of( m ) )
  {
    if ( !first )
      out += ",";
    out += names[i];
    first = false;
  }
  return out + "}";
}

/// Masks of the theories of C, in increasing subset order.
inline std::vector<Mask> theories_of( std::span<const Mask> table, TheoryReading reading = TheoryReading::fixed_point )
{
  std::vector<Mask> out;
  for ( Mask t = 0; t < table.size(); ++t )
    if ( reading == TheoryReading::fixed_point ? table[t] == t : is_subset( table[t], t ) )
      out.push_back( t );
  return out;
}

/// Frame whose models are the given theories, with T ⊨ a iff a ∈ T.
inline FiniteFrame theory_frame( const std::vector<std::string>& formulas, const std::vector<Mask>& theories )
{
  if ( theories.size() > kMaxWidth )
    throw InputError( "canonical frame would have " + std::to_string( theories.size() ) +
                      " theories, above the 62-model cap" );
  std::vector<std::string> models;
  for ( Mask t : theories )
    models.push_back( set_label( formulas, t ) );
  return FiniteFrame::from_rows( std::move( models ), formulas, theories );
}

/// Canonical frame: the theories of C as models.
inline FiniteFrame canonical_frame( const ConsequenceOperation& c, TheoryReading reading = TheoryReading::fixed_point )
{
  const auto table = c.materialize();
  return theory_frame( c.formulas(), theories_of( table, reading ) );
}

/// Canonical choice f(X) = X ∩ Mod(C(Th(X))) over the subsets of `cf`'s models.
inline ChoiceFunction canonical_choice_from_table( std::span<const Mask> table, const FiniteFrame& cf )
{
  if ( cf.model_count() > kMaxTableWidth )
    throw InputError( "canonical frame has " + std::to_string( cf.model_count() ) +
                      " theories; choice tables are capped at 20 models" );
  std::vector<Mask> values( std::size_t{ 1 } << cf.model_count() );
  for ( Mask x = 0; x < values.size(); ++x )
    values[x] = x & cf.mod_mask( table[cf.th_mask( x )] );
  return ChoiceFunction::table( cf.model_count(), std::move( values ) );
}

inline ChoiceFunction canonical_choice( const ConsequenceOperation& c, const FiniteFrame& cf )
{
  if ( cf.formulas() != c.formulas() )
    throw InputError( "frame mismatch: canonical frame formulas differ from the operation's formulas" );
  return canonical_choice_from_table( c.materialize(), cf );
}

/// Checks C(A) = Th(f(Mod(A))) for every A.
inline PropertyReport verify_representation( const ConsequenceEvaluator& ev, const FiniteFrame& frame,
                                             const ChoiceFunction& f )
{
  if ( frame.formula_count() != ev.width() )
    throw InputError( "frame formulas do not match the operation's formulas" );
  if ( f.width() != frame.model_count() )
    throw InputError( "choice function width does not match the frame" );
  PropertyReport r;
  r.property = "representation";
  ev.unary( r, [&]( Mask a ) { return ev.closure( a ) == frame.th_mask( f.apply_mask( frame.mod_mask( a ) ) ); } );
  return r;
}

inline PropertyReport verify_representation( const ConsequenceOperation& c, const FiniteFrame& frame,
                                             const ChoiceFunction& f )
{
  if ( frame.formulas() != c.formulas() )
    throw InputError( "frame formulas do not match the operation's formulas" );
  return verify_representation( ConsequenceEvaluator( c ), frame, f );
}

namespace detail
{

inline void skip_all( std::vector<PropertyReport>& out, const std::vector<std::string>& names, const std::string& why )
{
  for ( const auto& n : names )
    out.push_back( skipped_report( n, why ) );
}

inline std::string first_failure( const std::vector<PropertyReport>& reports )
{
  for ( const auto& r : reports )
    if ( !r.ok() )
      return r.property;
  return {};
}

inline std::vector<std::pair<Mask, Mask>> keys_of( std::span<const Mask> first, std::span<const Mask> second )
{
  std::vector<std::pair<Mask, Mask>> keys( first.size() );
  for ( std::size_t a = 0; a < keys.size(); ++a )
    keys[a] = { first[a], second[a] };
  return keys;
}

inline const std::vector<std::string> kCanonicalConclusions = {
    "contraction", "coherence", "local-mono", "expansion", "dp", "hull", "representation" };

/// Choice-side conclusions of the completeness direction on a given frame and choice function.
inline std::vector<PropertyReport> canonical_conclusions( const ConsequenceEvaluator& ev, const FiniteFrame& cf,
                                                          const ChoiceFunction& f )
{
  std::vector<PropertyReport> out;
  ChoiceEvaluator ce( cf, f );
  for ( auto p : { ChoiceProperty::contraction, ChoiceProperty::coherence, ChoiceProperty::local_monotonicity,
                   ChoiceProperty::expansion, ChoiceProperty::definability_preserving,
                   ChoiceProperty::hull_compatibility } )
    out.push_back( ce.evaluate( p ) );
  out.push_back( verify_representation( ev, cf, f ) );
  return out;
}

} // namespace detail

/*! \brief Completeness direction: from C to a canonical frame and choice function.

  Hypotheses are the five structural properties and property (E). When they
  hold, the canonical frame (theories as models) and f(X) = X ∩ Mod(C(Th X))
  are built and every conclusion and identity is checked exhaustively.
*/
inline TheoremReport verify_theorem1( const ConsequenceOperation& c, TheoryReading reading = TheoryReading::fixed_point )
{
  TheoremReport rep;
  rep.theorem = "1";
  {
    ConsequenceEvaluator ev( c );
    for ( auto p : kStructuralProperties )
      rep.hypotheses.push_back( ev.evaluate( p ) );
    rep.hypotheses.push_back( ev.evaluate( ConsequenceProperty::property_e ) );
  }
  const std::vector<std::string> identity_names = { "cap-supersets-identity", "mod-closure-identity",
                                                    "threshold-rewrite", "e-prime" };
  if ( auto failed = detail::first_failure( rep.hypotheses ); !failed.empty() )
  {
    detail::skip_all( rep.conclusions, detail::kCanonicalConclusions, "hypothesis " + failed + " fails" );
    detail::skip_all( rep.identities, identity_names, "hypothesis " + failed + " fails" );
    rep.finalize();
    return rep;
  }

  const auto cf = canonical_frame( c, reading );
  const auto table = c.materialize();
  const auto f = canonical_choice_from_table( table, cf );
  ConsequenceEvaluator ev( c, &cf );
  rep.conclusions = detail::canonical_conclusions( ev, cf, f );

  const auto tbl = ev.table();
  const auto caps = ev.cap();
  const auto tm = ev.thmod();

  PropertyReport cap_identity{ "cap-supersets-identity" };
  ev.unary( cap_identity, [&]( Mask a ) { return tm[a] == caps[a]; } );
  rep.identities.push_back( cap_identity );

  PropertyReport mod_identity{ "mod-closure-identity" };
  ev.unary( mod_identity, [&]( Mask a ) { return f.apply_mask( cf.mod_mask( a ) ) == cf.mod_mask( tbl[a] ); } );
  rep.identities.push_back( mod_identity );

  PropertyReport rewrite{ "threshold-rewrite" };
  ev.pairwise( rewrite, detail::keys_of( tbl, tbl ), [&]( auto ka, auto kb ) {
    const Mask u = ka.first | kb.first;
    return tbl[u] != caps[u];
  } );
  rep.identities.push_back( rewrite );

  PropertyReport e_prime{ "e-prime" };
  ev.pairwise( e_prime, detail::keys_of( tm, tbl ), [&]( auto ka, auto kb ) {
    return !is_subset( tbl[ka.first & kb.first], cf.th_mask( cf.mod_mask( ka.second | kb.second ) ) );
  } );
  rep.identities.push_back( e_prime );

  rep.finalize();
  return rep;
}

/*! \brief Soundness direction: from (frame, f) to C(A) = Th(f(Mod A)).

  Hypotheses: union-closed definable sets, definability preservation,
  Contraction, Coherence, Local Monotonicity, Expansion and hull
  compatibility. Conclusions: the structural properties, cumulativity and
  property (E). Identities cover the intermediate steps of the derivation:
  distributivity, Mod(C(A)) = f(Mod A), Th Mod A ⊆ cap(A), the reduction of
  the (E) operand to Th Mod A ∩ Th Mod B, and (E) for that reduced operand.
*/
inline TheoremReport verify_theorem2( const FiniteFrame& frame, const ChoiceFunction& f )
{
  TheoremReport rep;
  rep.theorem = "2";
  {
    auto uc = is_union_closed( frame );
    PropertyReport r{ "union-closed" };
    r.holds = uc.holds;
    r.checked = uc.pairs_checked;
    if ( uc.witness )
    {
      r.witness = { Binding{ "X", Domain::models, uc.witness->first.bits(), frame.model_names( uc.witness->first.bits() ) },
                    Binding{ "Y", Domain::models, uc.witness->second.bits(),
                             frame.model_names( uc.witness->second.bits() ) } };
    }
    rep.hypotheses.push_back( r );
    ChoiceEvaluator ce( frame, f );
    for ( auto p : { ChoiceProperty::definability_preserving, ChoiceProperty::contraction, ChoiceProperty::coherence,
                     ChoiceProperty::local_monotonicity, ChoiceProperty::expansion,
                     ChoiceProperty::hull_compatibility } )
      rep.hypotheses.push_back( ce.evaluate( p ) );
  }
  const std::vector<std::string> conclusion_names = { "inclusion",       "idempotence",    "cautious-mono",
                                                      "conditional-mono", "threshold-mono", "prop-e",
                                                      "cumulativity",    "representation" };
  const std::vector<std::string> identity_names = { "distributivity", "mod-closure-identity", "th-mod-below-cap",
                                                    "operand-reduction", "reduced-e" };
  if ( auto failed = detail::first_failure( rep.hypotheses ); !failed.empty() )
  {
    detail::skip_all( rep.conclusions, conclusion_names, "hypothesis " + failed + " fails" );
    detail::skip_all( rep.identities, identity_names, "hypothesis " + failed + " fails" );
    rep.finalize();
    return rep;
  }

  const auto c = derive_consequence( frame, f );
  ConsequenceEvaluator ev( c, &frame );
  for ( auto p : kStructuralProperties )
    rep.conclusions.push_back( ev.evaluate( p ) );
  rep.conclusions.push_back( ev.evaluate( ConsequenceProperty::property_e ) );
  rep.conclusions.push_back( ev.evaluate( ConsequenceProperty::cumulativity ) );
  rep.conclusions.push_back( verify_representation( ev, frame, f ) );

  const auto tbl = ev.table();
  const auto caps = ev.cap();
  const auto tm = ev.thmod();

  rep.identities.push_back( ev.evaluate( ConsequenceProperty::distributivity ) );

  PropertyReport mod_identity{ "mod-closure-identity" };
  ev.unary( mod_identity, [&]( Mask a ) { return frame.mod_mask( tbl[a] ) == f.apply_mask( frame.mod_mask( a ) ); } );
  rep.identities.push_back( mod_identity );

  PropertyReport below_cap{ "th-mod-below-cap" };
  ev.unary( below_cap, [&]( Mask a ) { return is_subset( tm[a], caps[a] ); } );
  rep.identities.push_back( below_cap );

  PropertyReport reduction{ "operand-reduction" };
  ev.pairwise( reduction, detail::keys_of( caps, tm ), [&]( auto ka, auto kb ) {
    return tbl[ka.first & kb.first] != tbl[ka.second & kb.second];
  } );
  rep.identities.push_back( reduction );

  PropertyReport reduced_e{ "reduced-e" };
  ev.pairwise( reduced_e, detail::keys_of( tm, tbl ), [&]( auto ka, auto kb ) {
    return !is_subset( tbl[ka.first & kb.first], tbl[ka.second | kb.second] );
  } );
  rep.identities.push_back( reduced_e );

  rep.finalize();
  return rep;
}

} // namespace choicelab
