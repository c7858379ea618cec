//! Read-only HTTP interface over a loaded lexicon.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use rand::Rng;
use serde::{Deserialize, Serialize};
use tower_http::cors::{Any, CorsLayer};

use valenz_core::embedding::VectorSpace;
use valenz_core::export::{export, ExportFormat};
use valenz_core::frames::list_frames;
use valenz_core::generator::enumerate_structures;
use valenz_core::lexicon::{AdjectivePosition, ArgumentSchema, ClassId, Language, VerbPosition};
use valenz_core::ontology::{classify_adjectives, drilldown, members, rank_prototypes};
use valenz_core::query::{parse_selection, run_generate, run_validate, GenerateRequest, ValidateRequest};
use valenz_core::{Error, Lexicon};

#[derive(Clone)]
pub struct AppState {
    pub lexicon: Arc<Lexicon>,
    pub vectors: Option<Arc<VectorSpace>>,
}

impl AppState {
    pub fn new(lexicon: Lexicon, vectors: Option<VectorSpace>) -> Self {
        AppState {
            lexicon: Arc::new(lexicon),
            vectors: vectors.map(Arc::new),
        }
    }
}

/// Which origins may call the API from a browser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorsOrigin {
    Any,
    Exact(String),
}

impl CorsOrigin {
    pub fn parse(s: &str) -> Self {
        match s.trim() {
            "" | "*" => CorsOrigin::Any,
            o => CorsOrigin::Exact(o.to_string()),
        }
    }

    fn layer(&self) -> Result<CorsLayer, String> {
        let base = CorsLayer::new().allow_methods(Any).allow_headers(Any);
        Ok(match self {
            CorsOrigin::Any => base.allow_origin(Any),
            CorsOrigin::Exact(o) => {
                base.allow_origin(HeaderValue::from_str(o).map_err(|_| format!("invalid CORS origin `{o}`"))?)
            }
        })
    }
}

pub fn router(state: AppState, cors: &CorsOrigin) -> Result<Router, String> {
    let sense = "/api/{lang}/nouns/{noun}/senses/{sense}";
    Ok(Router::new()
        .route("/api/languages", get(languages))
        .route("/api/{lang}/nouns", get(nouns))
        .route("/api/{lang}/nouns/{noun}/senses", get(senses))
        .route("/api/{lang}/nouns/{noun}/frames", get(frames))
        .route("/api/{lang}/nouns/{noun}/adjectives", get(adjectives))
        .route(&format!("{sense}/slots/{{slot}}/classes"), get(classes))
        .route(&format!("{sense}/slots/{{slot}}/members"), get(slot_members))
        .route(&format!("{sense}/slots/{{slot}}/prototypes"), get(prototypes))
        .route(&format!("{sense}/structures"), get(structures))
        .route("/api/generate", post(generate))
        .route("/api/validate", post(validate))
        .route("/api/export", post(export_phrases))
        .fallback(|| async { ApiError::NotFound("no such endpoint".into()) })
        .layer(cors.layer()?)
        .with_state(state))
}

/// Seeds stay below 2^53 so browsers read them back exactly.
pub fn fresh_seed() -> u64 {
    rand::thread_rng().gen_range(0..(1u64 << 53))
}

#[derive(Debug)]
pub enum ApiError {
    Core(Error),
    BadRequest(String),
    NotFound(String),
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError::Core(e)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::BadRequest(e.body_text())
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: ErrorDetail<'a>,
}

#[derive(Serialize)]
struct ErrorDetail<'a> {
    code: &'a str,
    message: String,
}

impl ApiError {
    fn status_and_code(&self) -> (StatusCode, &str) {
        match self {
            ApiError::BadRequest(_) => (StatusCode::BAD_REQUEST, "bad-request"),
            ApiError::NotFound(_) => (StatusCode::NOT_FOUND, "not-found"),
            ApiError::Core(e) => {
                let status = match e {
                    Error::NotFound(_) => StatusCode::NOT_FOUND,
                    Error::Domain(_)
                    | Error::Dependency { .. }
                    | Error::EmptyParadigm { .. }
                    | Error::FrameIncomplete(_)
                    | Error::Realization { .. } => StatusCode::UNPROCESSABLE_ENTITY,
                    _ => StatusCode::INTERNAL_SERVER_ERROR,
                };
                (status, e.code())
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, code) = self.status_and_code();
        let message = match &self {
            ApiError::Core(e) => e.to_string(),
            ApiError::BadRequest(m) | ApiError::NotFound(m) => m.clone(),
        };
        (status, Json(ErrorBody { error: ErrorDetail { code, message } })).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn language(code: &str) -> Result<Language, ApiError> {
    code.parse().map_err(ApiError::NotFound)
}

fn schema<'a>(lex: &'a Lexicon, lang: &str, noun: &str, sense: &str) -> Result<(Language, &'a ArgumentSchema), ApiError> {
    let l = language(lang)?;
    Ok((l, lex.schema(l, noun, sense)?))
}

async fn languages(State(s): State<AppState>) -> Json<Vec<Language>> {
    Json(s.lexicon.languages())
}

#[derive(Serialize)]
struct NounSummary {
    lemma: String,
    senses: Vec<SenseSummary>,
}

#[derive(Serialize)]
struct SenseSummary {
    sense: String,
    gloss: String,
}

async fn nouns(State(s): State<AppState>, Path(lang): Path<String>) -> ApiResult<Vec<NounSummary>> {
    let l = language(&lang)?;
    Ok(Json(
        s.lexicon
            .nouns(l)
            .map(|n| NounSummary {
                lemma: n.lemma.clone(),
                senses: n
                    .senses
                    .iter()
                    .map(|sc| SenseSummary {
                        sense: sc.sense.clone(),
                        gloss: sc.gloss.clone(),
                    })
                    .collect(),
            })
            .collect(),
    ))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SenseView {
    sense: String,
    gloss: String,
    slots: Vec<SlotView>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SlotView {
    index: u8,
    role: String,
    label: String,
    requires: Vec<u8>,
    realizations: Vec<String>,
}

async fn senses(State(s): State<AppState>, Path((lang, noun)): Path<(String, String)>) -> ApiResult<Vec<SenseView>> {
    let l = language(&lang)?;
    let lex = &s.lexicon;
    let n = lex
        .noun(l, &noun)
        .ok_or_else(|| ApiError::NotFound(format!("noun `{noun}` in {l}")))?;
    Ok(Json(
        n.senses
            .iter()
            .map(|sc| SenseView {
                sense: sc.sense.clone(),
                gloss: sc.gloss.clone(),
                slots: sc
                    .slots
                    .iter()
                    .map(|sl| SlotView {
                        index: sl.index,
                        role: sl.role.to_string(),
                        label: lex.slot_label(sl),
                        requires: sl.requires.iter().copied().collect(),
                        realizations: sl.realizations.iter().map(|r| r.code()).collect(),
                    })
                    .collect(),
            })
            .collect(),
    ))
}

#[derive(Deserialize)]
struct ParentQuery {
    parent: Option<String>,
}

async fn classes(
    State(s): State<AppState>,
    Path((lang, noun, sense, slot)): Path<(String, String, String, String)>,
    Query(q): Query<ParentQuery>,
) -> ApiResult<Vec<valenz_core::ontology::OntologyClass>> {
    let l = language(&lang)?;
    let parent = q.parent.filter(|p| !p.is_empty()).map(ClassId::new);
    Ok(Json(drilldown(&s.lexicon, l, &noun, &sense, &slot, parent.as_ref())?))
}

#[derive(Deserialize)]
struct ClassQuery {
    class: String,
}

async fn slot_members(
    State(s): State<AppState>,
    Path((lang, noun, sense, slot)): Path<(String, String, String, String)>,
    Query(q): Query<ClassQuery>,
) -> ApiResult<Vec<String>> {
    let l = language(&lang)?;
    Ok(Json(members(&s.lexicon, l, &noun, &sense, &slot, &ClassId::from(q.class.as_str()))?))
}

async fn prototypes(
    State(s): State<AppState>,
    Path((lang, noun, sense, slot)): Path<(String, String, String, String)>,
) -> ApiResult<Vec<valenz_core::ontology::Prototype>> {
    let l = language(&lang)?;
    Ok(Json(rank_prototypes(&s.lexicon, l, &noun, &sense, &slot)?))
}

#[derive(Deserialize)]
struct SelectionQuery {
    #[serde(default)]
    selection: String,
}

async fn structures(
    State(s): State<AppState>,
    Path((lang, noun, sense)): Path<(String, String, String)>,
    Query(q): Query<SelectionQuery>,
) -> ApiResult<Vec<valenz_core::generator::StructureTemplate>> {
    let (l, sc) = schema(&s.lexicon, &lang, &noun, &sense)?;
    let pairs = parse_selection(&q.selection)?;
    let sel = valenz_core::generator::resolve_selection(sc, pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())))?;
    Ok(Json(enumerate_structures(&s.lexicon, l, &noun, &sense, &sel)?))
}

#[derive(Deserialize)]
struct FrameQuery {
    position: Option<String>,
    sense: Option<String>,
}

async fn frames(
    State(s): State<AppState>,
    Path((lang, noun)): Path<(String, String)>,
    Query(q): Query<FrameQuery>,
) -> ApiResult<Vec<valenz_core::lexicon::SentenceFrame>> {
    let l = language(&lang)?;
    if s.lexicon.noun(l, &noun).is_none() {
        return Err(ApiError::NotFound(format!("noun `{noun}` in {l}")));
    }
    let position = q
        .position
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<VerbPosition>())
        .transpose()
        .map_err(|e| ApiError::Core(Error::Domain(e)))?;
    Ok(Json(
        list_frames(&s.lexicon, l, &noun, q.sense.as_deref(), position)
            .into_iter()
            .cloned()
            .collect(),
    ))
}

#[derive(Deserialize)]
struct AdjectiveQuery {
    position: String,
    sense: Option<String>,
}

async fn adjectives(
    State(s): State<AppState>,
    Path((lang, noun)): Path<(String, String)>,
    Query(q): Query<AdjectiveQuery>,
) -> ApiResult<valenz_core::ontology::RoleDistribution> {
    let l = language(&lang)?;
    let position: AdjectivePosition = q.position.parse().map_err(|e| ApiError::Core(Error::Domain(e)))?;
    Ok(Json(classify_adjectives(&s.lexicon, l, &noun, q.sense.as_deref(), position)?))
}

async fn generate(
    State(s): State<AppState>,
    body: Result<Json<GenerateRequest>, JsonRejection>,
) -> ApiResult<valenz_core::query::GenerateResponse> {
    let Json(req) = body?;
    Ok(Json(run_generate(&s.lexicon, s.vectors.as_deref(), &req, fresh_seed())?))
}

async fn validate(
    State(s): State<AppState>,
    body: Result<Json<ValidateRequest>, JsonRejection>,
) -> ApiResult<valenz_core::query::ValidationResult> {
    let Json(req) = body?;
    Ok(Json(run_validate(&s.lexicon, &req)))
}

#[derive(Deserialize)]
struct ExportQuery {
    format: Option<String>,
}

/// Generates and returns the phrases as a downloadable JSON or CSV file.
async fn export_phrases(
    State(s): State<AppState>,
    Query(q): Query<ExportQuery>,
    body: Result<Json<GenerateRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let format: ExportFormat = q
        .format
        .as_deref()
        .unwrap_or("json")
        .parse()
        .map_err(ApiError::BadRequest)?;
    let Json(req) = body?;
    let resp = run_generate(&s.lexicon, s.vectors.as_deref(), &req, fresh_seed())?;
    let bytes = export(&resp.export_rows(), format);
    let disposition = format!("attachment; filename=\"phrases-{}.{}\"", resp.meta.seed, format.extension());
    let mut r = (
        [(header::CONTENT_TYPE, format.content_type().to_string())],
        bytes,
    )
        .into_response();
    if let Ok(v) = HeaderValue::from_str(&disposition) {
        r.headers_mut().insert(header::CONTENT_DISPOSITION, v);
    }
    if let Ok(v) = HeaderValue::from_str(&resp.meta.seed.to_string()) {
        r.headers_mut().insert("x-valenz-seed", v);
    }
    Ok(r)
}
