#pragma once

#include <algorithm>
#include <atomic>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "bridge.hpp"
#include "choice.hpp"
#include "consequence.hpp"
#include "frame.hpp"
#include "orders.hpp"
#include "report.hpp"

namespace choicelab
{

enum class FrameMode
{
  none,          ///< bare ground set; frame-dependent properties are rejected
  all_definable, ///< every subset definable
  enumerate      ///< every satisfaction matrix up to max_formulas formulas
};

enum class SearchMode
{
  exhaustive,
  random
};

struct MineConfig
{
  int min_models = 0;
  int max_models = 3;
  int max_formulas = 2;
  std::vector<ChoiceProperty> satisfy;
  std::vector<ChoiceProperty> violate;
  FrameMode frame_mode = FrameMode::none;
  SearchMode mode = SearchMode::exhaustive;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  int jobs = 1;
};

/// A (frame, f) that satisfies one property list and violates another.
struct Witness
{
  std::optional<FiniteFrame> frame;
  int models = 0;
  ChoiceFunction choice;
  std::vector<ChoiceProperty> satisfied;
  std::vector<PropertyReport> violated;
  std::uint64_t index = 0; ///< position in the enumeration of its ground-set size
};

struct SizeStat
{
  int models = 0;
  std::uint64_t space = 0;   ///< candidates in the enumeration at this size
  std::uint64_t visited = 0; ///< candidates a sequential scan visits
};

struct MineResult
{
  std::optional<Witness> witness;
  std::vector<SizeStat> sizes;
  std::uint64_t visited = 0;
};

inline constexpr std::uint64_t kMaxCandidateSpace = std::uint64_t{ 1 } << 40;

/*! \brief Smallest index i in [0, total) with pred(i), searched by `jobs` workers.

  Each worker owns a contiguous range and stops once a smaller hit is known,
  so the result equals the sequential first hit regardless of `jobs`.
  `make_pred` is called once per worker to create thread-local state.
*/
template<class MakePred>
std::optional<std::uint64_t> parallel_first( std::uint64_t total, int jobs, MakePred make_pred )
{
  constexpr auto none = std::numeric_limits<std::uint64_t>::max();
  std::atomic<std::uint64_t> best{ none };
  auto run = [&]( std::uint64_t lo, std::uint64_t hi ) {
    auto pred = make_pred();
    for ( std::uint64_t i = lo; i < hi; ++i )
    {
      if ( i >= best.load( std::memory_order_relaxed ) )
        return;
      if ( pred( i ) )
      {
        auto cur = best.load();
        while ( i < cur && !best.compare_exchange_weak( cur, i ) )
        {
        }
        return;
      }
    }
  };
  const std::uint64_t workers = std::clamp<std::uint64_t>( jobs, 1, std::max<std::uint64_t>( total, 1 ) );
  if ( workers == 1 )
    run( 0, total );
  else
  {
    const std::uint64_t chunk = ( total + workers - 1 ) / workers;
    std::vector<std::thread> threads;
    for ( std::uint64_t w = 0; w < workers; ++w )
    {
      const std::uint64_t lo = w * chunk, hi = std::min( total, lo + chunk );
      if ( lo < hi )
        threads.emplace_back( run, lo, hi );
    }
    for ( auto& t : threads )
      t.join();
  }
  if ( best.load() == none )
    return std::nullopt;
  return best.load();
}

namespace detail
{

inline bool contains( const std::vector<ChoiceProperty>& ps, ChoiceProperty p )
{
  return std::find( ps.begin(), ps.end(), p ) != ps.end();
}

/*! Mixed-radix enumeration of choice tables on n elements.

  Digit X (least significant first) picks f(X): a submask of X when
  Contraction is required, any subset otherwise, skipping ∅ for X ≠ ∅ when
  nonemptiness is required. Digit values map monotonically to masks, so the
  order is binary counting order restricted to the admissible tables.
*/
class TableSpace
{
public:
  TableSpace( int n, bool contraction, bool nonempty ) : n_( n ), contraction_( contraction ), nonempty_( nonempty )
  {
    const Mask subsets = Mask{ 1 } << n;
    radix_.resize( subsets );
    unsigned __int128 size = 1;
    for ( Mask x = 0; x < subsets; ++x )
    {
      std::uint64_t r = contraction ? ( std::uint64_t{ 1 } << popcount( x ) ) : subsets;
      if ( nonempty && x != 0 )
        --r;
      radix_[x] = r;
      size *= r;
      if ( size > kMaxCandidateSpace )
        overflow_ = true, size = kMaxCandidateSpace + 1;
    }
    size_ = overflow_ ? 0 : static_cast<std::uint64_t>( size );
  }

  bool too_large() const noexcept { return overflow_; }
  std::uint64_t size() const noexcept { return size_; }
  std::uint64_t radix( Mask x ) const noexcept { return radix_[x]; }

  void decode( std::uint64_t index, std::vector<Mask>& table ) const
  {
    table.resize( radix_.size() );
    for ( Mask x = 0; x < radix_.size(); ++x )
    {
      const std::uint64_t digit = index % radix_[x];
      index /= radix_[x];
      table[x] = value( x, digit );
    }
  }

  Mask value( Mask x, std::uint64_t digit ) const noexcept
  {
    const Mask v = digit + ( nonempty_ && x != 0 ? 1 : 0 );
    return contraction_ ? deposit_bits( v, x ) : v;
  }

  int models() const noexcept { return n_; }

private:
  int n_;
  bool contraction_;
  bool nonempty_;
  bool overflow_ = false;
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> radix_;
};

inline std::vector<FiniteFrame> frames_for( const MineConfig& cfg, int n )
{
  std::vector<FiniteFrame> out;
  switch ( cfg.frame_mode )
  {
  case FrameMode::none:
    break;
  case FrameMode::all_definable:
    out.push_back( full_definability_frame( n ) );
    break;
  case FrameMode::enumerate:
    for ( int l = 0; l <= cfg.max_formulas; ++l )
    {
      if ( n * l > 24 )
        throw InputError( "max-formulas: enumerating all " + std::to_string( n ) + "x" + std::to_string( l ) +
                          " satisfaction matrices is too large" );
      for ( Mask sat = 0; sat < ( Mask{ 1 } << ( n * l ) ); ++sat )
        out.push_back( numbered_frame( n, l, sat ) );
    }
    break;
  }
  return out;
}

/// Evaluates one candidate: every `satisfy` property holds and every `violate` property fails.
inline bool is_witness( std::span<const Mask> table, int n, std::span<const Mask> hull, const MineConfig& cfg )
{
  for ( auto p : cfg.satisfy )
    if ( !check_choice_table( table, n, p, Scope::all_subsets, hull ).holds )
      return false;
  for ( auto p : cfg.violate )
    if ( check_choice_table( table, n, p, Scope::all_subsets, hull ).holds )
      return false;
  return true;
}

inline Witness make_witness( const MineConfig& cfg, int n, const std::optional<FiniteFrame>& frame,
                             std::vector<Mask> table, std::uint64_t index )
{
  Witness w;
  w.frame = frame;
  w.models = n;
  w.choice = ChoiceFunction::table( n, std::move( table ) );
  w.satisfied = cfg.satisfy;
  w.index = index;
  std::optional<ChoiceEvaluator> ev;
  if ( frame )
    ev.emplace( *frame, w.choice );
  else
    ev.emplace( n, w.choice );
  for ( auto p : cfg.violate )
    w.violated.push_back( ev->evaluate( p ) );
  return w;
}

inline void validate( const MineConfig& cfg )
{
  for ( auto p : cfg.satisfy )
    if ( contains( cfg.violate, p ) )
      throw InputError( "contradictory configuration: " + std::string( name_of( p ) ) +
                        " is both required and forbidden" );
  if ( cfg.violate.empty() )
    throw InputError( "violate: at least one property is required" );
  if ( cfg.frame_mode == FrameMode::none )
    for ( const auto* list : { &cfg.satisfy, &cfg.violate } )
      for ( auto p : *list )
        if ( needs_frame( p ) )
          throw InputError( "frame-mode: property " + std::string( name_of( p ) ) +
                            " needs a frame; use all-definable or enumerate" );
  if ( cfg.min_models < 0 || cfg.max_models < cfg.min_models )
    throw InputError( "max-models: must be >= 0" );
  if ( cfg.max_models > 5 )
    throw InputError( "max-models: capped at 5" );
  if ( cfg.max_formulas < 0 )
    throw InputError( "max-formulas: must be >= 0" );
  if ( cfg.jobs < 1 )
    throw InputError( "jobs: must be >= 1" );
}

inline MineResult mine_exhaustive( const MineConfig& cfg )
{
  MineResult out;
  const bool contraction = contains( cfg.satisfy, ChoiceProperty::contraction );
  const bool nonempty = contains( cfg.satisfy, ChoiceProperty::nonempty );
  for ( int n = cfg.min_models; n <= cfg.max_models; ++n )
  {
    TableSpace space( n, contraction, nonempty );
    if ( space.too_large() )
      throw InputError( "max-models: candidate space at " + std::to_string( n ) + " models exceeds 2^40" );
    std::vector<std::optional<FiniteFrame>> frames;
    std::vector<std::vector<Mask>> hulls;
    if ( cfg.frame_mode == FrameMode::none )
    {
      frames.emplace_back();
      hulls.emplace_back();
    }
    else
      for ( auto& fr : frames_for( cfg, n ) )
      {
        hulls.push_back( hull_table( fr ) );
        frames.emplace_back( std::move( fr ) );
      }
    const std::uint64_t per_frame = space.size();
    const std::uint64_t total = per_frame * frames.size();
    auto hit = parallel_first( total, cfg.jobs, [&] {
      return [&, table = std::vector<Mask>()]( std::uint64_t i ) mutable {
        const auto fi = i / per_frame;
        space.decode( i % per_frame, table );
        return is_witness( table, n, hulls[fi], cfg );
      };
    } );
    SizeStat stat{ n, total, hit ? *hit + 1 : total };
    out.sizes.push_back( stat );
    out.visited += stat.visited;
    if ( hit )
    {
      std::vector<Mask> table;
      space.decode( *hit % per_frame, table );
      out.witness = make_witness( cfg, n, frames[*hit / per_frame], std::move( table ), *hit );
      return out;
    }
  }
  return out;
}

/// Candidate i of a random run, drawn from a generator seeded by (seed, i).
inline std::pair<std::optional<FiniteFrame>, std::vector<Mask>> random_candidate( const MineConfig& cfg,
                                                                                  std::uint64_t i )
{
  std::seed_seq seq{ static_cast<std::uint32_t>( cfg.seed ), static_cast<std::uint32_t>( cfg.seed >> 32 ),
                     static_cast<std::uint32_t>( i ), static_cast<std::uint32_t>( i >> 32 ) };
  std::mt19937_64 rng( seq );
  const int n = cfg.min_models + static_cast<int>( rng() % ( cfg.max_models - cfg.min_models + 1 ) );
  std::optional<FiniteFrame> frame;
  if ( cfg.frame_mode == FrameMode::all_definable )
    frame = full_definability_frame( n );
  else if ( cfg.frame_mode == FrameMode::enumerate )
  {
    const int l = static_cast<int>( rng() % ( cfg.max_formulas + 1 ) );
    frame = numbered_frame( n, l, rng() & low_bits( n * l ) );
  }
  TableSpace space( n, contains( cfg.satisfy, ChoiceProperty::contraction ),
                    contains( cfg.satisfy, ChoiceProperty::nonempty ) );
  std::vector<Mask> table( std::size_t{ 1 } << n );
  for ( Mask x = 0; x < table.size(); ++x )
    table[x] = space.value( x, rng() % space.radix( x ) );
  return { std::move( frame ), std::move( table ) };
}

inline MineResult mine_random( const MineConfig& cfg )
{
  if ( cfg.max_models > 16 )
    throw InputError( "max-models: random search is capped at 16 models" );
  if ( cfg.frame_mode == FrameMode::enumerate && cfg.max_models * cfg.max_formulas > 62 )
    throw InputError( "max-formulas: random frames need max-models * max-formulas <= 62" );
  MineResult out;
  auto hit = parallel_first( cfg.budget, cfg.jobs, [&] {
    return [&]( std::uint64_t i ) {
      auto [frame, table] = random_candidate( cfg, i );
      const int n = static_cast<int>( std::countr_zero( table.size() ) );
      std::vector<Mask> hull = frame ? hull_table( *frame ) : std::vector<Mask>{};
      return is_witness( table, n, hull, cfg );
    };
  } );
  out.visited = hit ? *hit + 1 : cfg.budget;
  if ( hit )
  {
    auto [frame, table] = random_candidate( cfg, *hit );
    const int n = static_cast<int>( std::countr_zero( table.size() ) );
    out.witness = make_witness( cfg, n, frame, std::move( table ), *hit );
  }
  return out;
}

} // namespace detail

/*! \brief Searches for a choice function that satisfies `satisfy` and violates every property in `violate`.

  Exhaustive mode scans ground sets of increasing size and, within a size,
  frames then tables in enumeration order; the first witness is returned.
  Random mode draws `budget` candidates, each from its own seeded generator.
  Both modes return the same result for any `jobs`.
*/
inline MineResult mine( const MineConfig& cfg )
{
  detail::validate( cfg );
  return cfg.mode == SearchMode::exhaustive ? detail::mine_exhaustive( cfg ) : detail::mine_random( cfg );
}

/// Re-evaluates a witness from scratch; true iff the recorded verdicts are reproduced.
inline bool reverify( const Witness& w, const std::vector<ChoiceProperty>& violate )
{
  std::optional<ChoiceEvaluator> ev;
  if ( w.frame )
    ev.emplace( *w.frame, w.choice );
  else
    ev.emplace( w.models, w.choice );
  for ( auto p : w.satisfied )
    if ( !ev->evaluate( p ).holds )
      return false;
  if ( violate.size() != w.violated.size() )
    return false;
  for ( std::size_t i = 0; i < violate.size(); ++i )
    if ( ev->evaluate( violate[i] ) != w.violated[i] )
      return false;
  return true;
}

struct ArrowStudy
{
  int max_models = 0;
  MineResult with_nonempty;    ///< Contraction + Arrow + nonempty, against Expansion
  MineResult without_nonempty; ///< Contraction + Arrow, against Expansion
};

inline MineConfig arrow_config( int max_models, bool nonempty, int jobs )
{
  MineConfig cfg;
  cfg.min_models = 0;
  cfg.max_models = max_models;
  cfg.satisfy = { ChoiceProperty::contraction, ChoiceProperty::arrow };
  if ( nonempty )
    cfg.satisfy.push_back( ChoiceProperty::nonempty );
  cfg.violate = { ChoiceProperty::expansion };
  cfg.jobs = jobs;
  return cfg;
}

/// Whether Contraction and Arrow force Expansion, with and without nonempty choices.
inline ArrowStudy study_arrow_expansion( int max_models, int jobs = 1 )
{
  if ( max_models < 0 || max_models > 4 )
    throw InputError( "max-models: the Arrow study is capped at 4 models" );
  ArrowStudy s;
  s.max_models = max_models;
  s.with_nonempty = mine( arrow_config( max_models, true, jobs ) );
  s.without_nonempty = mine( arrow_config( max_models, false, jobs ) );
  return s;
}

struct PreferentialSearch
{
  FiniteFrame frame; ///< canonical frame of the operation
  std::optional<Relation> order;
  std::uint64_t orders_total = 0;
  std::uint64_t orders_checked = 0;
};

/// First strict partial order on the canonical models whose minimal-element choice derives exactly C.
inline PreferentialSearch find_preferential_representation( const ConsequenceOperation& c, int jobs = 1 )
{
  PreferentialSearch out;
  const auto table = c.materialize();
  out.frame = theory_frame( c.formulas(), theories_of( table ) );
  const int n = out.frame.model_count();
  if ( n > 6 )
    throw InputError( "canonical frame has " + std::to_string( n ) + " theories; the order search is capped at 6" );
  const auto orders = strict_partial_orders( n );
  out.orders_total = orders.size();
  const auto& fr = out.frame;
  auto hit = parallel_first( orders.size(), jobs, [&] {
    return [&]( std::uint64_t i ) {
      const auto f = ChoiceFunction::preferential( n, edges_of( orders[i] ) );
      for ( Mask a = 0; a < table.size(); ++a )
        if ( table[a] != fr.th_mask( f.apply_mask( fr.mod_mask( a ) ) ) )
          return false;
      return true;
    };
  } );
  out.orders_checked = hit ? *hit + 1 : orders.size();
  if ( hit )
    out.order = orders[*hit];
  return out;
}

} // namespace choicelab
