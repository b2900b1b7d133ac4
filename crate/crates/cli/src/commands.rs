use std::path::Path;

use textile_inspect::dataset::io::{self as dio, LabeledFeatures};
use textile_inspect::dataset::{self, CorpusSpec, DefectClass};
use textile_inspect::experiments::{self, SweepConfig, SweepRow};
use textile_inspect::features;
use textile_inspect::gann::prune::{self, PruneSchedule};
use textile_inspect::gann::{classify, model_io, GaParams, NetworkTopology, Verdict, WeightCodec};
use textile_inspect::imaging::{pnm, InspectionPipeline, PipelineConfig};

use crate::{
    DataArgs, EvaluateArgs, Failure, GaArgs, GenDataArgs, InspectArgs, PipelineArgs, PruneArgs,
    SweepArgs, SweepParam, TrainArgs,
};

type CmdResult = Result<(), Failure>;

fn pipeline(args: &PipelineArgs) -> Result<InspectionPipeline, Failure> {
    Ok(InspectionPipeline::new(PipelineConfig {
        min_defect_size: args.min_defect_size,
        min_peak_distance: args.min_peak_distance,
        ..PipelineConfig::default()
    })?)
}

fn load_data(data: &DataArgs, p: &PipelineArgs) -> Result<Vec<LabeledFeatures>, Failure> {
    let rows = match (&data.corpus, &data.features) {
        (Some(dir), _) => dio::corpus_features(dir, &pipeline(p)?)?,
        (None, Some(file)) => dio::read_features(file)?,
        (None, None) => {
            return Err(Failure::Usage(
                "one of --corpus or --features is required".into(),
            ))
        }
    };
    if rows.is_empty() {
        return Err(Failure::Invalid("the corpus is empty".into()));
    }
    Ok(rows)
}

fn ga_params(ga: &GaArgs) -> GaParams {
    GaParams {
        population_size: ga.population,
        crossover_rate: ga.pc,
        mutation_rate: ga.pm,
        target_fitness: ga.target_fitness,
        max_cycles: ga.max_cycles,
        max_time: ga.max_time.0,
        seed: ga.seed,
    }
}

fn create_dir(dir: &Path) -> CmdResult {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))
}

fn sweep_config(ga: &GaArgs, hidden: usize, rounds: usize) -> Result<SweepConfig, Failure> {
    Ok(SweepConfig {
        topology: NetworkTopology::defect_classifier(hidden)?,
        codec: WeightCodec::new(ga.bits)?,
        params: ga_params(ga),
        rounds,
    })
}

pub fn gen_data(a: GenDataArgs) -> CmdResult {
    let counts: [usize; 6] =
        a.counts.as_slice().try_into().map_err(|_| {
            Failure::Usage(format!("--counts needs 6 values, got {}", a.counts.len()))
        })?;
    let spec = CorpusSpec {
        counts,
        size: a.size,
        texture: a.texture,
        noise: a.noise,
        seed: a.seed,
    };
    let images = dataset::generate_corpus(&spec)?;
    create_dir(&a.out)?;
    dio::write_corpus(&a.out, &images)?;
    if !a.no_features {
        let rows = dio::extract_features(&images, &pipeline(&a.pipeline)?)?;
        dio::write_features(&a.out.join(dio::FEATURES_FILE), &rows)?;
    }
    println!("wrote {} images to {}", images.len(), a.out.display());
    Ok(())
}

pub fn inspect(a: InspectArgs) -> CmdResult {
    let image = pnm::read(&a.image)?;
    let model = model_io::load(&a.model)?;
    let stages = pipeline(&a.pipeline)?.run(&image)?;
    if let Some(dir) = &a.debug_stages {
        create_dir(dir)?;
        let stem = a
            .image
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("image");
        stages.write_debug(dir, stem)?;
    }
    let (raw, scaled) = features::from_stages(&stages);
    let verdict = if stages.regions.is_empty() {
        log::info!("no defect region survived denoising");
        Verdict::Class(DefectClass::DefectFree)
    } else {
        classify(&model.network.forward(&scaled.to_array())?)
    };
    println!("verdict: {verdict}");
    println!(
        "raw: height={} width={} ratio={} regions={}",
        raw.height, raw.width, raw.ratio, raw.regions
    );
    println!(
        "scaled: height={} width={} ratio={} regions={}",
        scaled.height, scaled.width, scaled.ratio, scaled.regions
    );
    Ok(())
}

pub fn train(a: TrainArgs) -> CmdResult {
    let data = load_data(&a.data, &a.pipeline)?;
    let topology = NetworkTopology::defect_classifier(a.hidden)?;
    let codec = WeightCodec::new(a.ga.bits)?;
    let params = ga_params(&a.ga);
    let result = dataset::repeated_train_eval(&data, &topology, &codec, &params, a.rounds)?;
    for (r, o) in result.rounds.iter().enumerate() {
        let rec = &o.model.record;
        println!(
            "round {r}: train {} test {} E={} cycles={} stop={} correct {}/{} ({:.2}%)",
            o.plan.train.len(),
            o.plan.test.len(),
            rec.best_error,
            rec.cycles,
            rec.stop_reason,
            o.correct,
            o.total,
            o.accuracy_pct()
        );
    }
    let chosen = result.chosen();
    println!(
        "reported round {}: {} with {:.2}% accuracy",
        result.chosen,
        chosen.model.topology(),
        chosen.accuracy_pct()
    );
    if let Some(path) = &a.report {
        let rows: Vec<SweepRow> = result
            .rounds
            .iter()
            .map(|o| SweepRow::from_outcome(o, &params))
            .collect();
        experiments::emit_report(&rows, path)?;
    }
    model_io::save(&chosen.model, &a.model_out)?;
    Ok(())
}

pub fn evaluate(a: EvaluateArgs) -> CmdResult {
    let data = load_data(&a.data, &a.pipeline)?;
    let model = model_io::load(&a.model)?;
    let mut per_class = [(0usize, 0usize); 6];
    for d in &data {
        let verdict = classify(&model.network.forward(&d.scaled.to_array())?);
        let slot = &mut per_class[d.class.index()];
        slot.1 += 1;
        if verdict == Verdict::Class(d.class) {
            slot.0 += 1;
        }
    }
    for (class, (ok, n)) in DefectClass::ALL.iter().zip(per_class) {
        if n > 0 {
            println!("{class}: {ok}/{n}");
        }
    }
    let (ok, n) = per_class
        .iter()
        .fold((0, 0), |acc, c| (acc.0 + c.0, acc.1 + c.1));
    println!("overall: {ok}/{n} ({:.2}%)", 100.0 * ok as f64 / n as f64);
    let zero = classify(&model.network.forward(&[0.0; 4])?);
    println!("zero feature vector: {zero}");
    Ok(())
}

fn population_sizes(values: &[f64]) -> Result<Vec<usize>, Failure> {
    values
        .iter()
        .map(|&v| {
            if v >= 1.0 && v.fract() == 0.0 && v <= usize::MAX as f64 {
                Ok(v as usize)
            } else {
                Err(Failure::Usage(format!(
                    "population size {v} is not a positive integer"
                )))
            }
        })
        .collect()
}

pub fn sweep(a: SweepArgs) -> CmdResult {
    let data = load_data(&a.data, &a.pipeline)?;
    let cfg = sweep_config(&a.ga, a.hidden, a.rounds)?;
    let values = a.values.as_deref();
    let rows = match a.param {
        SweepParam::Population => {
            let sizes = match values {
                Some(v) => population_sizes(v)?,
                None => experiments::DEFAULT_POPULATION_SIZES.to_vec(),
            };
            experiments::sweep_population(&data, &cfg, &sizes)?
        }
        SweepParam::Crossover => {
            let rates = values.unwrap_or(&experiments::DEFAULT_CROSSOVER_RATES);
            experiments::sweep_crossover(&data, &cfg, rates)?
        }
        SweepParam::Mutation => {
            let rates = values.unwrap_or(&experiments::DEFAULT_MUTATION_RATES_LOW);
            experiments::sweep_mutation(&data, &cfg, rates)?
        }
        SweepParam::MutationHigh => {
            let rates = values.unwrap_or(&experiments::DEFAULT_MUTATION_RATES_HIGH);
            experiments::sweep_mutation(&data, &cfg, rates)?
        }
    };
    experiments::emit_report(&rows, &a.out)?;
    println!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}

pub fn prune(a: PruneArgs) -> CmdResult {
    let data = load_data(&a.data, &a.pipeline)?;
    let cfg = sweep_config(&a.ga, a.start, a.rounds)?;
    let schedule = PruneSchedule {
        start: a.start,
        step: a.step,
        stop: a.stop,
        extra: a.extra.clone(),
    };
    let steps = prune::prune_hidden(&data, &cfg, &schedule)?;
    if let Some(dir) = &a.models_dir {
        create_dir(dir)?;
        for s in &steps {
            model_io::save(
                &s.model,
                &dir.join(format!("hidden_{}.model", s.row.hidden)),
            )?;
        }
    }
    let rows: Vec<SweepRow> = steps.into_iter().map(|s| s.row).collect();
    experiments::emit_report(&rows, &a.out)?;
    println!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}
