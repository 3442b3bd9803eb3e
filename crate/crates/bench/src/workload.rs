//! Synthetic map graph and taxi relations.
//!
//! The map follows the OpenStreetMap layout: `osm` links to every point and
//! way, points carry `id`, `lon`, `lat` and `tag` edges, tags carry `k`/`v`,
//! and ways list their points through `nd`/`ref` chains. A point's `id` value
//! is the point itself so that `ref` targets can be followed back with
//! `next^-1::id`.
//!
//! Orders and GPS rows reuse map coordinates. Thirty common dates carry the
//! bulk of the rows and grow with the requested size; one unique date carries
//! a fixed set of planted rows that stays put at every size.

use std::collections::BTreeSet;
use std::io::{self, Write};
use std::path::Path;

use fpq_core::{parse_query, Constant, Query, RdfGraph, RelDatabase, Relation, Triple};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Points in the desk-scale map; yields roughly 14,000 triples.
pub const DEFAULT_POINTS: usize = 2330;

pub const ORDERS_COLUMNS: [&str; 7] = ["ID", "Date", "Driver ID", "Vehicle ID", "Passenger ID", "Lon", "Lat"];
pub const GPS_COLUMNS: [&str; 4] = ["Date", "Lon", "Lat", "Driver ID"];

/// The six orders of the running taxi example, as CSV.
pub const TAXI_ORDERS: &str = include_str!("../data/taxi_orders.csv");

const COMMON_DATES: usize = 30;
/// Date filtered on by q1 and q2.
pub const COMMON_DATE: &str = "2019-03-01";
/// Date carrying only planted rows; filtered on by q3 and q4.
pub const UNIQUE_DATE: &str = "2019-04-01";

const OTHER_KEYS: [(&str, &[&str]); 4] = [
    ("highway", &["bus_stop", "crossing", "traffic_signals"]),
    ("amenity", &["cafe", "fuel", "parking", "taxi"]),
    ("shop", &["bakery", "kiosk", "supermarket"]),
    ("name", &["Main", "Station", "Park", "Market"]),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapPoint {
    pub node: Constant,
    pub lon: Constant,
    pub lat: Constant,
    pub tourist: bool,
    pub on_road: bool,
}

/// Generated map plus what the generator knows about it.
#[derive(Clone, Debug)]
pub struct MapGraph {
    pub graph: RdfGraph,
    pub points: Vec<MapPoint>,
    pub ways: usize,
    /// Distinct constants written, for round-trip checks.
    pub constants: usize,
}

impl MapGraph {
    pub fn tourist_points(&self) -> impl Iterator<Item = &MapPoint> {
        self.points.iter().filter(|p| p.tourist)
    }

    pub fn road_points(&self) -> impl Iterator<Item = &MapPoint> {
        self.points.iter().filter(|p| p.on_road)
    }
}

fn coordinate(base: f64, step: f64, i: usize) -> Constant {
    Constant::from(format!("{:.6}", base + step * i as f64))
}

pub fn gen_map_graph(seed: u64, n_points: usize) -> MapGraph {
    assert!(n_points >= 2, "a map needs at least two points");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = |s: &str| Constant::from(s);
    let (osm, node, way, id, lon, lat, tag, k, v, nd, rf) =
        (c("osm"), c("node"), c("way"), c("id"), c("lon"), c("lat"), c("tag"), c("k"), c("v"), c("nd"), c("ref"));

    // Latitudes are a shuffled grid so lon and lat orders disagree.
    let mut lat_slots: Vec<usize> = (0..n_points).collect();
    lat_slots.shuffle(&mut rng);
    let n_tourist = (n_points / 150).max(1);
    let n_road = (n_points / 90).max(1);
    let mut order: Vec<usize> = (0..n_points).collect();
    order.shuffle(&mut rng);
    let tourist: BTreeSet<usize> = order[..n_tourist].iter().copied().collect();
    let road: Vec<usize> = order[n_tourist..(n_tourist + n_road).min(n_points)].to_vec();
    let road_set: BTreeSet<usize> = road.iter().copied().collect();

    let mut triples = Vec::new();
    let mut points = Vec::with_capacity(n_points);
    let mut tags = 0usize;
    let mut fresh_tag = |triples: &mut Vec<Triple>, subject: &Constant, key: &str, value: &str| {
        let t = Constant::from(format!("t{tags}"));
        tags += 1;
        triples.push(Triple { s: subject.clone(), p: tag.clone(), o: t.clone() });
        triples.push(Triple { s: t.clone(), p: k.clone(), o: Constant::from(key) });
        triples.push(Triple { s: t, p: v.clone(), o: Constant::from(value) });
    };
    for (i, &slot) in lat_slots.iter().enumerate() {
        let n = Constant::from(format!("n{i}"));
        let p = MapPoint {
            node: n.clone(),
            lon: coordinate(116.2, 0.0001, i),
            lat: coordinate(39.8, 0.0001, slot),
            tourist: tourist.contains(&i),
            on_road: road_set.contains(&i),
        };
        triples.push(Triple { s: osm.clone(), p: node.clone(), o: n.clone() });
        triples.push(Triple { s: n.clone(), p: id.clone(), o: n.clone() });
        triples.push(Triple { s: n.clone(), p: lon.clone(), o: p.lon.clone() });
        triples.push(Triple { s: n.clone(), p: lat.clone(), o: p.lat.clone() });
        if p.tourist {
            fresh_tag(&mut triples, &n, "tourism", "attraction");
        }
        if rng.gen_bool(0.65) {
            let (key, values) = OTHER_KEYS.choose(&mut rng).unwrap();
            fresh_tag(&mut triples, &n, key, values.choose(&mut rng).unwrap());
        }
        points.push(p);
    }

    // Roads: consecutive runs of about five road points.
    let ways = road.len().div_ceil(5);
    let mut nds = 0usize;
    for (w, run) in road.chunks(5).enumerate() {
        let wc = Constant::from(format!("w{w}"));
        triples.push(Triple { s: osm.clone(), p: way.clone(), o: wc.clone() });
        triples.push(Triple { s: wc.clone(), p: id.clone(), o: wc.clone() });
        fresh_tag(&mut triples, &wc, "highway", "residential");
        for &i in run {
            let ndc = Constant::from(format!("nd{nds}"));
            nds += 1;
            triples.push(Triple { s: wc.clone(), p: nd.clone(), o: ndc.clone() });
            triples.push(Triple { s: ndc, p: rf.clone(), o: points[i].node.clone() });
        }
    }

    let constants: BTreeSet<&Constant> = triples.iter().flat_map(|t| [&t.s, &t.p, &t.o]).collect();
    let constants = constants.len();
    MapGraph { graph: RdfGraph::from_triples(triples), points, ways, constants }
}

/// The generated Orders and GPS relations.
#[derive(Clone, Debug)]
pub struct TaxiData {
    pub orders: Relation,
    pub gps: Relation,
}

impl TaxiData {
    pub fn database(&self) -> RelDatabase {
        RelDatabase::new().with(self.orders.clone()).unwrap().with(self.gps.clone()).unwrap()
    }
}

struct Pools {
    dates: Vec<Constant>,
    drivers: Vec<Constant>,
    vehicles: Vec<Constant>,
    passengers: Vec<Constant>,
}

impl Pools {
    fn new() -> Self {
        let numbered = |prefix: &str, n: usize| (0..n).map(|i| Constant::from(format!("{prefix}{i}"))).collect();
        Pools {
            dates: (1..=COMMON_DATES).map(|d| Constant::from(format!("2019-03-{d:02}"))).collect(),
            drivers: numbered("d", 800),
            vehicles: numbered("v", 800),
            passengers: numbered("p", 50_000),
        }
    }
}

/// Coordinates for a filler row: mostly real points, biased towards the
/// tourist and road points so the federated joins see them at small sizes.
fn pick_coordinates(rng: &mut ChaCha8Rng, map: &MapGraph, tourist: &[&MapPoint], road: &[&MapPoint]) -> (Constant, Constant) {
    let roll: f64 = rng.gen();
    let p = if roll < 0.1 {
        return (
            Constant::from(format!("{:.6}", rng.gen_range(117.0..118.0))),
            Constant::from(format!("{:.6}", rng.gen_range(40.0..41.0))),
        );
    } else if roll < 0.2 {
        tourist.choose(rng).copied()
    } else if roll < 0.3 {
        road.choose(rng).copied()
    } else {
        map.points.choose(rng)
    };
    let p = p.unwrap_or(&map.points[0]);
    (p.lon.clone(), p.lat.clone())
}

/// Orders and GPS with `n_tuples` filler rows each, plus the planted rows on
/// [`UNIQUE_DATE`] (present at every size, including 0).
pub fn gen_orders(seed: u64, n_tuples: usize, map: &MapGraph) -> TaxiData {
    let pools = Pools::new();
    let tourist: Vec<&MapPoint> = map.tourist_points().collect();
    let road: Vec<&MapPoint> = map.road_points().collect();
    let mut orders: Vec<[Constant; 7]> = Vec::with_capacity(n_tuples + 16);
    let mut gps: Vec<[Constant; 4]> = Vec::with_capacity(n_tuples + 16);

    // Planted rows depend on the seed only.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7ab1e);
    let unique = Constant::from(UNIQUE_DATE);
    let off_road: Vec<&MapPoint> = map.points.iter().filter(|p| !p.on_road).collect();
    for i in 0..16 {
        let p = if i < 5 { road[i % road.len()] } else { off_road.choose(&mut rng).copied().unwrap_or(&map.points[0]) };
        let driver = pools.drivers[i].clone();
        orders.push([
            Constant::from(format!("u{i}")),
            unique.clone(),
            driver.clone(),
            pools.vehicles[i].clone(),
            pools.passengers[i].clone(),
            p.lon.clone(),
            p.lat.clone(),
        ]);
        // The last order has no matching GPS fix.
        if i < 15 {
            gps.push([unique.clone(), p.lon.clone(), p.lat.clone(), driver]);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n_tuples {
        let date = pools.dates.choose(&mut rng).unwrap().clone();
        let (lon, lat) = pick_coordinates(&mut rng, map, &tourist, &road);
        orders.push([
            Constant::from(i.to_string()),
            date,
            pools.drivers.choose(&mut rng).unwrap().clone(),
            pools.vehicles.choose(&mut rng).unwrap().clone(),
            pools.passengers.choose(&mut rng).unwrap().clone(),
            lon,
            lat,
        ]);
        let date = pools.dates.choose(&mut rng).unwrap().clone();
        let (lon, lat) = pick_coordinates(&mut rng, map, &tourist, &road);
        gps.push([date, lon, lat, pools.drivers.choose(&mut rng).unwrap().clone()]);
    }

    let names = |cols: &[&str]| cols.iter().map(|c| c.to_string()).collect();
    TaxiData {
        orders: Relation::new("Orders", 7, orders).unwrap().with_column_names(names(&ORDERS_COLUMNS)),
        gps: Relation::new("GPS", 4, gps).unwrap().with_column_names(names(&GPS_COLUMNS)),
    }
}

pub fn write_relation_csv<W: Write>(r: &Relation, w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    if let Some(names) = r.column_names() {
        out.write_record(names)?;
    } else {
        out.write_record((0..r.arity()).map(|i| format!("c{i}")))?;
    }
    for t in r.tuples() {
        out.write_record(t.iter().map(Constant::as_str))?;
    }
    out.flush()
}

/// Write `map.nt`, `orders.csv`, `gps.csv` and a `relations.json` manifest
/// into `dir`.
pub fn emit(dir: &Path, map: &MapGraph, data: &TaxiData) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    map.graph.write_to(io::BufWriter::new(std::fs::File::create(dir.join("map.nt"))?))?;
    write_relation_csv(&data.orders, io::BufWriter::new(std::fs::File::create(dir.join("orders.csv"))?))?;
    write_relation_csv(&data.gps, io::BufWriter::new(std::fs::File::create(dir.join("gps.csv"))?))?;
    let manifest = serde_json::json!({
        "relations": [
            { "name": "Orders", "path": "orders.csv" },
            { "name": "GPS", "path": "gps.csv" },
        ]
    });
    std::fs::write(dir.join("relations.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(())
}

/// The four bundled queries, in order.
pub const QUERIES: [(&str, &str); 4] = [
    ("q1", include_str!("../queries/q1.fpq")),
    ("q2", include_str!("../queries/q2.fpq")),
    ("q3", include_str!("../queries/q3.fpq")),
    ("q4", include_str!("../queries/q4.fpq")),
];

pub fn bundled_queries() -> Vec<(&'static str, Query)> {
    QUERIES
        .iter()
        .map(|&(name, text)| (name, parse_query(text).unwrap_or_else(|e| panic!("bundled {name}: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpq_core::{eval_nre, eval_query, load_relation, parse_nre, HeterogeneousDb};

    #[test]
    fn five_points_give_five_coordinate_pairs() {
        let map = gen_map_graph(1, 5);
        let pairs = eval_nre(&map.graph, &parse_nre("next^-1::lon/next::lat").unwrap());
        assert_eq!(pairs.len(), 5);
        for p in &map.points {
            assert!(pairs.contains(&(p.lon.clone(), p.lat.clone())));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let write = |m: &MapGraph| {
            let mut out = Vec::new();
            m.graph.write_to(&mut out).unwrap();
            out
        };
        assert_eq!(write(&gen_map_graph(3, 200)), write(&gen_map_graph(3, 200)));
        assert_ne!(write(&gen_map_graph(3, 200)), write(&gen_map_graph(4, 200)));
        let map = gen_map_graph(3, 200);
        assert_eq!(gen_orders(9, 500, &map).orders, gen_orders(9, 500, &map).orders);
    }

    #[test]
    fn desk_scale_map_is_about_14k_triples() {
        let map = gen_map_graph(7, DEFAULT_POINTS);
        assert!((13_000..=15_000).contains(&map.graph.len()), "{}", map.graph.len());
        assert_eq!(map.graph.adom().len(), map.constants);
        assert_eq!(map.tourist_points().count(), 15);
        assert_eq!(map.road_points().count(), 25);
    }

    #[test]
    fn zero_tuples_keeps_only_planted_rows() {
        let map = gen_map_graph(1, 300);
        let data = gen_orders(1, 0, &map);
        assert_eq!((data.orders.len(), data.gps.len()), (16, 15));
        assert!(data.orders.tuples().all(|t| t[1].as_str() == UNIQUE_DATE));
    }

    #[test]
    fn csv_round_trip() {
        let map = gen_map_graph(1, 300);
        let data = gen_orders(1, 200, &map);
        let mut out = Vec::new();
        write_relation_csv(&data.orders, &mut out).unwrap();
        let back = load_relation("Orders", out.as_slice()).unwrap();
        assert_eq!(back, data.orders);
        let taxi = load_relation("Orders", TAXI_ORDERS.as_bytes()).unwrap();
        assert_eq!((taxi.arity(), taxi.len()), (7, 6));
    }

    #[test]
    fn q1_joins_at_small_sizes() {
        let map = gen_map_graph(2, 600);
        for n in [100, 1000] {
            let d = HeterogeneousDb::new(map.graph.clone(), gen_orders(n as u64, n, &map).database());
            let (_, q1) = &bundled_queries()[0];
            assert!(!eval_query(&d, q1).unwrap().is_empty(), "n = {n}");
        }
    }

    #[test]
    fn bundled_queries_parse() {
        let names: Vec<&str> = bundled_queries().iter().map(|(n, _)| *n).collect();
        assert_eq!(names, ["q1", "q2", "q3", "q4"]);
    }
}
