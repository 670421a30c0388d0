#include "ctsem/transport.hpp"

#include <algorithm>
#include <deque>

namespace ctsem
{

std::string to_string( const rational& r )
{
    return r.str();
}

omega::omega( rational v ) : _v{ std::move( v ) }
{
    if ( _v < 0 || _v > 1 )
        throw out_of_unit_interval( to_string( _v ) + " is not in [0, 1]" );
}

omega oplus( const omega& r, const omega& s )
{
    return omega( std::min( rational( r.value() + s.value() ), rational( 1 ) ) );
}

omega omega_inf( const std::vector< omega >& family )
{
    return family.empty() ? omega::one() : *std::min_element( family.begin(), family.end() );
}

std::string omega_predicate::str() const
{
    std::string s = "(";
    for ( std::size_t i = 0; i < _w.size(); ++i )
        s += ( i ? ", " : "" ) + _w[ i ].str();
    return s + ")";
}

omega_predicate pq_unit( std::size_t n, std::size_t x )
{
    if ( x >= n )
        throw carrier_mismatch( "unit at an element outside the carrier" );
    std::vector< omega > w( n, omega::one() );
    w[ x ] = omega::zero();
    return omega_predicate( std::move( w ) );
}

omega_predicate pq_map( const mapping& f, std::size_t cod_size, const omega_predicate& g )
{
    if ( f.size() != g.size() )
        throw carrier_mismatch( "mapping and predicate over different carriers" );
    std::vector< omega > w( cod_size, omega::one() );
    for ( std::size_t x = 0; x < f.size(); ++x )
    {
        if ( f[ x ] >= cod_size )
            throw carrier_mismatch( "mapping leaves its codomain" );
        w[ f[ x ] ] = std::min( w[ f[ x ] ], g[ x ] );
    }
    return omega_predicate( std::move( w ) );
}

omega_matrix pq_kl_identity( std::size_t n )
{
    omega_matrix id;
    for ( std::size_t x = 0; x < n; ++x )
        id.push_back( pq_unit( n, x ) );
    return id;
}

omega_matrix pq_kl_compose( const omega_matrix& g, const omega_matrix& f )
{
    const auto zs = g.empty() ? 0 : g.front().size();
    for ( const auto& row : f )
        if ( row.size() != g.size() )
            throw carrier_mismatch( "Omega matrices do not compose" );
    for ( const auto& row : g )
        if ( row.size() != zs )
            throw carrier_mismatch( "ragged Omega matrix" );
    omega_matrix out;
    for ( const auto& row : f )
    {
        std::vector< omega > w( zs, omega::one() );
        for ( std::size_t y = 0; y < row.size(); ++y )
            for ( std::size_t z = 0; z < zs; ++z )
                w[ z ] = std::min( w[ z ], oplus( row[ y ], g[ y ][ z ] ) );
        out.emplace_back( std::move( w ) );
    }
    return out;
}

omega_predicate2::omega_predicate2( std::size_t n, const std::map< omega_predicate, omega >& weights ) : _n{ n }
{
    for ( const auto& [ p, w ] : weights )
    {
        if ( p.size() != n )
            throw carrier_mismatch( "second-order predicate over predicates of another carrier" );
        if ( w != omega::one() )
            _w.emplace( p, w );
    }
}

omega omega_predicate2::operator()( const omega_predicate& p ) const
{
    auto it = _w.find( p );
    return it == _w.end() ? omega::one() : it->second;
}

std::string omega_predicate2::str() const
{
    std::string s = "{";
    bool first = true;
    for ( const auto& [ p, w ] : _w )
    {
        s += ( first ? "" : ", " ) + p.str() + " -> " + w.str();
        first = false;
    }
    return s + "}";
}

omega_predicate pq_mult( const omega_predicate2& big )
{
    std::vector< omega > w( big.base_size(), omega::one() );
    for ( const auto& [ g, v ] : big.finite_part() )
        for ( std::size_t x = 0; x < w.size(); ++x )
            w[ x ] = std::min( w[ x ], oplus( v, g[ x ] ) );
    return omega_predicate( std::move( w ) );
}

std::string dist_str( const point_dist& d )
{
    std::string s = "[";
    bool first = true;
    for ( const auto& [ x, w ] : d )
    {
        s += ( first ? "" : ", " ) + std::to_string( x ) + ": " + to_string( w );
        first = false;
    }
    return s + "]";
}

std::string dist_str( const predicate_dist& d )
{
    std::string s = "[";
    bool first = true;
    for ( const auto& [ p, w ] : d )
    {
        s += ( first ? "" : ", " ) + p.str() + ": " + to_string( w );
        first = false;
    }
    return s + "]";
}

omega expectation_lift( const omega_predicate& p, const point_dist& mu )
{
    rational sum = 0;
    for ( const auto& [ x, w ] : mu )
    {
        if ( x >= p.size() )
            throw carrier_mismatch( "distribution outside the predicate's carrier" );
        sum += p[ x ].value() * w;
    }
    return omega( sum );
}

transport_result solve_transport( const std::vector< rational >& supply, const std::vector< rational >& demand,
                                  const std::vector< std::vector< rational > >& cost )
{
    const auto m = supply.size();
    const auto n = demand.size();
    if ( cost.size() != m )
        throw carrier_mismatch( "cost matrix rows do not match the supplies" );
    for ( const auto& row : cost )
        if ( row.size() != n )
            throw carrier_mismatch( "cost matrix columns do not match the demands" );
    rational ts = 0, td = 0;
    for ( const auto& s : supply )
    {
        if ( s < 0 )
            throw infeasible_mass( "negative supply" );
        ts += s;
    }
    for ( const auto& d : demand )
    {
        if ( d < 0 )
            throw infeasible_mass( "negative demand" );
        td += d;
    }
    if ( ts != td )
        throw infeasible_mass( "supply " + to_string( ts ) + " does not balance demand " + to_string( td ) );

    transport_result res;
    res.flow.assign( m, std::vector< rational >( n ) );
    if ( m == 0 || n == 0 )
        return res;

    // North-west corner: a spanning tree of m + n - 1 basic cells.
    std::vector< char > basic( m * n, 0 );
    {
        auto s = supply;
        auto d = demand;
        std::size_t i = 0, j = 0;
        while ( i < m && j < n )
        {
            const auto x = std::min( s[ i ], d[ j ] );
            res.flow[ i ][ j ] = x;
            basic[ i * n + j ] = 1;
            s[ i ] -= x;
            d[ j ] -= x;
            if ( s[ i ] == 0 && i + 1 < m )
                ++i;
            else
                ++j;
        }
    }

    // Tree nodes: rows 0..m-1, columns m..m+n-1.
    const auto nodes = m + n;
    for ( ;; )
    {
        std::vector< std::vector< std::size_t > > adj( nodes );
        for ( std::size_t c = 0; c < m * n; ++c )
            if ( basic[ c ] )
            {
                adj[ c / n ].push_back( c );
                adj[ m + c % n ].push_back( c );
            }
        auto other = [ & ]( std::size_t node, std::size_t c ) { return node < m ? m + c % n : c / n; };

        // Potentials u_i + v_j = c_ij on basic cells.
        std::vector< rational > pot( nodes );
        std::vector< char > seen( nodes, 0 );
        std::deque< std::size_t > queue{ 0 };
        seen[ 0 ] = 1;
        while ( !queue.empty() )
        {
            auto node = queue.front();
            queue.pop_front();
            for ( auto c : adj[ node ] )
            {
                auto next = other( node, c );
                if ( seen[ next ] )
                    continue;
                seen[ next ] = 1;
                pot[ next ] = cost[ c / n ][ c % n ] - pot[ node ];
                queue.push_back( next );
            }
        }

        // Bland: the first improving cell enters.
        std::size_t enter = m * n;
        for ( std::size_t c = 0; c < m * n && enter == m * n; ++c )
            if ( !basic[ c ] && cost[ c / n ][ c % n ] - pot[ c / n ] - pot[ m + c % n ] < 0 )
                enter = c;
        if ( enter == m * n )
            break;

        // Tree path from the entering row to the entering column.
        const auto from = enter / n;
        const auto to = m + enter % n;
        std::vector< std::size_t > via( nodes, m * n );
        std::fill( seen.begin(), seen.end(), 0 );
        queue = { from };
        seen[ from ] = 1;
        while ( !queue.empty() )
        {
            auto node = queue.front();
            queue.pop_front();
            for ( auto c : adj[ node ] )
            {
                auto next = other( node, c );
                if ( seen[ next ] )
                    continue;
                seen[ next ] = 1;
                via[ next ] = c;
                queue.push_back( next );
            }
        }
        std::vector< std::size_t > path;
        for ( auto node = to; node != from; )
        {
            auto c = via[ node ];
            path.push_back( c );
            node = other( node, c );
        }
        std::reverse( path.begin(), path.end() ); // starts at the entering row

        // Cells at even positions lose flow; the smallest such index leaves on ties.
        std::size_t leave = m * n;
        for ( std::size_t k = 0; k < path.size(); k += 2 )
        {
            const auto c = path[ k ];
            if ( leave == m * n || res.flow[ c / n ][ c % n ] < res.flow[ leave / n ][ leave % n ]
                 || ( res.flow[ c / n ][ c % n ] == res.flow[ leave / n ][ leave % n ] && c < leave ) )
                leave = c;
        }
        const rational step = res.flow[ leave / n ][ leave % n ];
        res.flow[ enter / n ][ enter % n ] += step;
        for ( std::size_t k = 0; k < path.size(); ++k )
        {
            const auto c = path[ k ];
            if ( k % 2 == 0 )
                res.flow[ c / n ][ c % n ] -= step;
            else
                res.flow[ c / n ][ c % n ] += step;
        }
        basic[ leave ] = 0;
        basic[ enter ] = 1;
        ++res.pivots;
    }

    for ( std::size_t i = 0; i < m; ++i )
        for ( std::size_t j = 0; j < n; ++j )
            res.value += res.flow[ i ][ j ] * cost[ i ][ j ];
    return res;
}

namespace
{

// Optimal coupling of two distributions under an arbitrary cost.
template < class A, class B, class C >
std::pair< rational, std::map< std::pair< A, B >, rational > > couple( const dist< A >& rows, const dist< B >& cols,
                                                                       C&& cost )
{
    std::vector< A > as;
    std::vector< B > bs;
    std::vector< rational > supply, demand;
    for ( const auto& [ a, w ] : rows )
    {
        as.push_back( a );
        supply.push_back( w );
    }
    for ( const auto& [ b, w ] : cols )
    {
        bs.push_back( b );
        demand.push_back( w );
    }
    std::vector< std::vector< rational > > c( as.size(), std::vector< rational >( bs.size() ) );
    for ( std::size_t i = 0; i < as.size(); ++i )
        for ( std::size_t j = 0; j < bs.size(); ++j )
            c[ i ][ j ] = cost( as[ i ], bs[ j ] );
    auto sol = solve_transport( supply, demand, c );
    std::map< std::pair< A, B >, rational > flow;
    for ( std::size_t i = 0; i < as.size(); ++i )
        for ( std::size_t j = 0; j < bs.size(); ++j )
            if ( sol.flow[ i ][ j ] != 0 )
                flow.emplace( std::pair{ as[ i ], bs[ j ] }, sol.flow[ i ][ j ] );
    return { sol.value, std::move( flow ) };
}

rational evaluation_cost( const omega_predicate& p, std::size_t x )
{
    if ( x >= p.size() )
        throw carrier_mismatch( "distribution outside the predicates' carrier" );
    return p[ x ].value();
}

// vartheta_X (M) (mu) without the support bound, for intermediate distributions.
omega theta_unbounded( const predicate_dist& big_m, const point_dist& mu )
{
    return omega( couple( big_m, mu, evaluation_cost ).first );
}

} // namespace

coupling_result optimal_coupling( const predicate_dist& big_m, const point_dist& mu )
{
    if ( big_m.support_size() > max_coupling_support || mu.support_size() > max_coupling_support )
        throw carrier_too_large( "coupling supports beyond " + std::to_string( max_coupling_support ) );
    auto [ value, flow ] = couple( big_m, mu, evaluation_cost );
    return { omega( value ), dist< std::pair< omega_predicate, std::size_t > >( flow ) };
}

omega optimal_coupling_value( const predicate_dist& big_m, const point_dist& mu )
{
    return optimal_coupling( big_m, mu ).value;
}

omega theta_quantale::operator()( const point_dist& mu ) const
{
    auto it = _memo.find( mu );
    if ( it != _memo.end() )
        return it->second;
    auto v = optimal_coupling_value( _m, mu );
    _memo.emplace( mu, v );
    return v;
}

law_report check_quantale_laws( const quantale_probes& u )
{
    const auto n = u.carrier;
    const auto probes = std::to_string( u.probes.size() );
    law_report rep;

    auto& unit = rep.add( "unit triangle: vartheta . D unit = unit D", "at " + probes + " probe distributions" );
    for ( const auto& mu : u.unit_inputs )
    {
        theta_quantale th( push_forward( mu, [ n ]( std::size_t x ) { return pq_unit( n, x ); } ) );
        for ( const auto& nu : u.probes )
        {
            auto lhs = th( nu );
            auto rhs = mu == nu ? omega::zero() : omega::one();
            record( unit, lhs == rhs, [ & ] {
                return "mu = " + dist_str( mu ) + ", nu = " + dist_str( nu ) + ": " + lhs.str() + " vs " + rhs.str();
            } );
        }
    }

    auto& mult = rep.add( "multiplication pentagon: vartheta . D mult = mult D . T vartheta . vartheta T",
                          "at " + probes + " probe distributions, infima over candidate intermediates" );
    for ( const auto& big : u.nested )
    {
        auto flat = push_forward( big, pq_mult );
        for ( const auto& nu : u.probes )
        {
            auto [ lhs_value, lhs_flow ] = couple( flat, nu, evaluation_cost );
            const omega lhs( lhs_value );

            // Glue the optimal coupling through the best intermediate predicate.
            std::map< omega_predicate, rational > glued;
            for ( const auto& [ qx, w ] : lhs_flow )
            {
                const auto& [ q, x ] = qx;
                const auto share = w / flat.weight( q );
                for ( const auto& [ g, gw ] : big )
                {
                    if ( pq_mult( g ) != q )
                        continue;
                    auto best = omega_predicate::constant( n, omega::zero() );
                    auto best_cost = omega::one();
                    for ( const auto& [ p, pw ] : g.finite_part() )
                        if ( oplus( pw, p[ x ] ) < best_cost )
                        {
                            best = p;
                            best_cost = oplus( pw, p[ x ] );
                        }
                    glued[ best ] += share * gw;
                }
            }
            std::vector< predicate_dist > candidates{ predicate_dist( glued ) };
            candidates.push_back( predicate_dist::point( omega_predicate::constant( n, omega::zero() ) ) );
            for ( const auto& [ g, gw ] : big )
                for ( const auto& [ p, pw ] : g.finite_part() )
                    candidates.push_back( predicate_dist::point( p ) );

            auto rhs = omega::one();
            for ( const auto& mid : candidates )
            {
                auto outer = omega( couple( big, mid, []( const omega_predicate2& g, const omega_predicate& p ) {
                                        return g( p ).value();
                                    } ).first );
                rhs = std::min( rhs, oplus( outer, theta_unbounded( mid, nu ) ) );
            }
            record( mult, lhs == rhs, [ & ] {
                return "nu = " + dist_str( nu ) + ": " + lhs.str() + " vs " + rhs.str();
            } );
        }
    }

    auto& nat = rep.add( "naturality: vartheta . D T f = T D f . vartheta",
                         "registered mappings, at push-forwards of the probes and point masses" );
    for ( const auto& reg : u.mappings )
    {
        const auto& f = reg.f;
        std::vector< point_dist > targets;
        for ( const auto& mu : u.probes )
            targets.push_back( push_forward( mu, [ & ]( std::size_t x ) { return f.at( x ); } ) );
        for ( std::size_t y = 0; y < reg.cod_size; ++y )
            targets.push_back( point_dist::point( y ) );
        std::sort( targets.begin(), targets.end() );
        targets.erase( std::unique( targets.begin(), targets.end() ), targets.end() );

        for ( const auto& big : u.predicates )
        {
            auto moved = push_forward( big, [ & ]( const omega_predicate& p ) { return pq_map( f, reg.cod_size, p ); } );
            for ( const auto& nu : targets )
            {
                auto [ lhs_value, lhs_flow ] = couple( moved, nu, evaluation_cost );
                const omega lhs( lhs_value );

                bool reachable = true;
                for ( const auto& [ y, w ] : nu )
                    reachable = reachable && std::find( f.begin(), f.end(), y ) != f.end();
                auto rhs = omega::one(); // inf over the empty fibre of D f
                if ( reachable )
                {
                    std::map< std::size_t, rational > glued;
                    for ( const auto& [ qy, w ] : lhs_flow )
                    {
                        const auto& [ q, y ] = qy;
                        const auto share = w / moved.weight( q );
                        for ( const auto& [ p, pw ] : big )
                        {
                            if ( pq_map( f, reg.cod_size, p ) != q )
                                continue;
                            std::size_t best = f.size();
                            for ( std::size_t x = 0; x < f.size(); ++x )
                                if ( f[ x ] == y && ( best == f.size() || p[ x ] < p[ best ] ) )
                                    best = x;
                            glued[ best ] += share * pw;
                        }
                    }
                    std::vector< point_dist > candidates{ point_dist( glued ) };
                    for ( const auto& mu : u.probes )
                        if ( push_forward( mu, [ & ]( std::size_t x ) { return f.at( x ); } ) == nu )
                            candidates.push_back( mu );
                    for ( const auto& mu : candidates )
                        rhs = std::min( rhs, theta_unbounded( big, mu ) );
                }
                record( nat, lhs == rhs, [ & ] {
                    return "M = " + dist_str( big ) + ", nu = " + dist_str( nu ) + ": " + lhs.str() + " vs "
                           + rhs.str();
                } );
            }
        }
    }
    return rep;
}

} // namespace ctsem
