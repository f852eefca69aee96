//! Endpoint configuration.

#[derive(Debug, Clone, PartialEq)]
pub struct EndpointConfig {
    pub api_url: String,
    pub sparql_url: String,
    pub auth_token: Option<String>,
    /// Maximum write requests per second.
    pub edit_rate_limit: f64,
}

impl EndpointConfig {
    pub fn new(api_url: impl Into<String>, sparql_url: impl Into<String>) -> EndpointConfig {
        EndpointConfig {
            api_url: api_url.into(),
            sparql_url: sparql_url.into(),
            auth_token: None,
            edit_rate_limit: 10.0,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, url) in [("api_url", &self.api_url), ("sparql_url", &self.sparql_url)] {
            let parsed = reqwest::Url::parse(url)
                .map_err(|e| format!("{name} \"{url}\" is not an absolute url: {e}"))?;
            if !matches!(parsed.scheme(), "http" | "https") {
                return Err(format!("{name} \"{url}\" must use http or https"));
            }
        }
        if !(self.edit_rate_limit > 0.0) {
            return Err("edit_rate_limit must be greater than zero".to_owned());
        }
        Ok(())
    }
}
